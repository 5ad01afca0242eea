#include "aet/mpoly.hpp"

#include <cctype>

namespace aet {

namespace {

constexpr int kMaxExponent = 1 << 20;

// Recursive-descent parser for the documented grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | power
//   power  := atom ('^' nat)?
//   atom   := nat | var | '(' expr ')'
struct Parser {
    const std::string& s;
    size_t pos = 0;
    const std::vector<std::string>& vars;

    Parser(const std::string& text, const std::vector<std::string>& v) : s(text), vars(v) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos; return true; }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw parse_error(pos, std::string("expected '") + c + "'");
    }

    MPoly expr() {
        bool neg = false;
        skip_ws();
        // leading sign
        if (accept('-')) neg = true;
        else accept('+');
        MPoly r = term();
        if (neg) r = -r;
        for (;;) {
            if (accept('+')) r = r + term();
            else if (accept('-')) r = r - term();
            else break;
        }
        return r;
    }

    MPoly term() {
        MPoly r = factor();
        while (accept('*')) r = r * factor();
        return r;
    }

    MPoly factor() {
        if (accept('-')) return -factor();
        return power();
    }

    MPoly power() {
        MPoly base = atom();
        if (accept('^')) {
            skip_ws();
            size_t at = pos;
            if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
                throw parse_error(at, "expected nonnegative integer exponent");
            long e = 0;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
                e = e * 10 + (s[pos] - '0');
                if (e > kMaxExponent) throw parse_error(at, "exponent overflow");
                ++pos;
            }
            MPoly r = MPoly::constant(1, base.vars);
            MPoly sq = base;
            long k = e;
            while (k) {
                if (k & 1) r = r * sq;
                k >>= 1;
                if (k) sq = sq * sq;
            }
            return r;
        }
        return base;
    }

    MPoly atom() {
        skip_ws();
        if (pos >= s.size()) throw parse_error(pos, "unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            MPoly r = expr();
            expect(')');
            return r;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
            mpz_class v(s.substr(start, pos - start));
            return MPoly::constant(v, vars);
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            for (size_t v = 0; v < vars.size(); ++v)
                if (vars[v] == name) return MPoly::variable((int)v, vars);
            throw parse_error(start, "unknown variable '" + name + "'");
        }
        throw parse_error(pos, std::string("unexpected character '") + c + "'");
    }

    MPoly run() {
        MPoly r = expr();
        skip_ws();
        if (pos != s.size())
            throw parse_error(pos, "trailing input");
        return r;
    }
};

} // namespace

MPoly parse_poly(const std::string& text, const std::vector<std::string>& vars) {
    if (vars.empty() || vars.size() > 4)
        throw invariant_error("parse_poly: 1..4 variables supported");
    Parser p(text, vars);
    return p.run();
}

Poly1 parse_poly1(const std::string& text, const std::string& var) {
    return to_poly1(parse_poly(text, {var}), 0);
}

} // namespace aet

#include "aet/mpoly.hpp"

#include <algorithm>

namespace aet {

MPoly MPoly::constant(const mpz_class& c, std::vector<std::string> names) {
    MPoly p(std::move(names));
    if (c != 0) p.terms[{0, 0, 0, 0}] = c;
    return p;
}

MPoly MPoly::variable(int index, std::vector<std::string> names) {
    MPoly p(std::move(names));
    if (index < 0 || index >= p.nvars) throw invariant_error("variable index out of range");
    Exp e{0, 0, 0, 0};
    e[index] = 1;
    p.terms[e] = 1;
    return p;
}

int MPoly::total_degree() const {
    if (terms.empty()) return -1;
    const Exp& e = terms.rbegin()->first;  // grlex: last term has max degree
    return e[0] + e[1] + e[2] + e[3];
}

int MPoly::degree_in(int v) const {
    if (terms.empty()) return -1;
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, e[v]);
    return d;
}

void MPoly::add_term(const Exp& e, const mpz_class& c) {
    if (c == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
        terms.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

mpz_class MPoly::coeff(const Exp& e) const {
    auto it = terms.find(e);
    return it == terms.end() ? mpz_class(0) : it->second;
}

MPoly MPoly::with_vars(std::vector<std::string> names) const {
    if ((int)names.size() != nvars) throw invariant_error("with_vars: arity mismatch");
    MPoly r = *this;
    r.vars = std::move(names);
    return r;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (const auto& [e, c] : b.terms) r.add_term(e, c);
    return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (const auto& [e, c] : b.terms) r.add_term(e, -c);
    return r;
}

MPoly operator-(const MPoly& a) {
    MPoly r = a;
    for (auto& [e, c] : r.terms) c = -c;
    return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(a.vars);
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            MPoly::Exp e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
            r.add_term(e, ca * cb);
        }
    return r;
}

MPoly operator*(const mpz_class& s, const MPoly& a) {
    MPoly r(a.vars);
    if (s == 0) return r;
    for (const auto& [e, c] : a.terms) r.terms[e] = s * c;
    return r;
}

MPoly homogeneous_part(const MPoly& f, int i) {
    MPoly r(f.vars);
    for (const auto& [e, c] : f.terms)
        if (e[0] + e[1] + e[2] + e[3] == i) r.terms[e] = c;
    return r;
}

mpz_class content(const MPoly& f) {
    if (f.is_zero()) throw invariant_error("content of zero polynomial");
    mpz_class g = 0;
    for (const auto& [e, c] : f.terms) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

mpz_class eval(const MPoly& f, const std::vector<mpz_class>& point) {
    if ((int)point.size() != f.nvars) throw invariant_error("eval: arity mismatch");
    mpz_class r = 0, t;
    for (const auto& [e, c] : f.terms) {
        t = c;
        for (int v = 0; v < f.nvars; ++v)
            for (int k = 0; k < e[v]; ++k) t *= point[v];
        r += t;
    }
    return r;
}

mpq_class eval(const MPoly& f, const std::vector<mpq_class>& point) {
    if ((int)point.size() != f.nvars) throw invariant_error("eval: arity mismatch");
    mpq_class r = 0, t;
    for (const auto& [e, c] : f.terms) {
        t = c;
        for (int v = 0; v < f.nvars; ++v)
            for (int k = 0; k < e[v]; ++k) t *= point[v];
        r += t;
    }
    return r;
}

i64 eval_mod(const MPoly& f, const std::vector<i64>& point, i64 m) {
    if ((int)point.size() != f.nvars) throw invariant_error("eval_mod: arity mismatch");
    // power cache per variable
    int maxdeg = 0;
    for (const auto& [e, c] : f.terms)
        for (int v = 0; v < f.nvars; ++v) maxdeg = std::max(maxdeg, e[v]);
    std::vector<std::vector<i64>> pw(f.nvars, std::vector<i64>(maxdeg + 1, 1));
    for (int v = 0; v < f.nvars; ++v) {
        i64 x = mod_reduce(point[v], m);
        for (int k = 1; k <= maxdeg; ++k) pw[v][k] = pw[v][k - 1] * x % m;
    }
    i64 r = 0;
    for (const auto& [e, c] : f.terms) {
        i64 t = mod_reduce(c, m);
        for (int v = 0; v < f.nvars; ++v) t = t * pw[v][e[v]] % m;
        r = (r + t) % m;
    }
    return r;
}

MPoly derivative(const MPoly& f, int v) {
    MPoly r(f.vars);
    for (const auto& [e, c] : f.terms) {
        if (e[v] == 0) continue;
        MPoly::Exp e2 = e;
        e2[v] -= 1;
        r.add_term(e2, mpz_class(e[v]) * c);
    }
    return r;
}

Poly1 substitute1(const MPoly& f, const std::vector<Poly1>& subs) {
    if ((int)subs.size() != f.nvars) throw invariant_error("substitute1: arity mismatch");
    std::string var = subs.empty() ? "x" : subs[0].var;
    Poly1 r({}, var);
    for (const auto& [e, c] : f.terms) {
        Poly1 t = Poly1::constant(c, var);
        for (int v = 0; v < f.nvars; ++v)
            for (int k = 0; k < e[v]; ++k) t = t * subs[v];
        r = r + t;
    }
    return r;
}

MPoly homogenize(const MPoly& f, int degree, const std::string& wname) {
    if (f.nvars >= 4) throw invariant_error("homogenize: no free variable slot");
    std::vector<std::string> names = f.vars;
    names.push_back(wname);
    MPoly r(names);
    for (const auto& [e, c] : f.terms) {
        int d = e[0] + e[1] + e[2] + e[3];
        if (d > degree) throw invariant_error("homogenize: degree too small");
        MPoly::Exp e2 = e;
        e2[f.nvars] = degree - d;
        r.terms[e2] = c;
    }
    return r;
}

MPoly substitute_value(const MPoly& f, int v, const mpz_class& value) {
    MPoly r(f.vars);
    for (const auto& [e, c] : f.terms) {
        mpz_class t = c;
        for (int k = 0; k < e[v]; ++k) t *= value;
        MPoly::Exp e2 = e;
        e2[v] = 0;
        r.add_term(e2, t);
    }
    return r;
}

std::vector<MPoly> collect(const MPoly& f, int v) {
    int d = std::max(0, f.degree_in(v));
    std::vector<MPoly> out((size_t)d + 1, MPoly(f.vars));
    for (const auto& [e, c] : f.terms) {
        MPoly::Exp e2 = e;
        int k = e2[v];
        e2[v] = 0;
        out[k].add_term(e2, c);
    }
    return out;
}

Poly1 to_poly1(const MPoly& f, int v) {
    std::vector<mpz_class> c;
    for (const auto& [e, cf] : f.terms) {
        for (int u = 0; u < f.nvars; ++u)
            if (u != v && e[u] != 0)
                throw invariant_error("to_poly1: polynomial is not univariate in " + f.vars[v]);
        if ((int)c.size() <= e[v]) c.resize(e[v] + 1, mpz_class(0));
        c[e[v]] = cf;
    }
    return Poly1(std::move(c), f.vars[v]);
}

MPoly from_poly1(const Poly1& f, int v, std::vector<std::string> names) {
    MPoly r(std::move(names));
    for (int i = 0; i <= f.degree(); ++i) {
        if (f.coeff[i] == 0) continue;
        MPoly::Exp e{0, 0, 0, 0};
        e[v] = i;
        r.terms[e] = f.coeff[i];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Canonical printer.
// ---------------------------------------------------------------------------

static void print_term(std::string& out, const MPoly::Exp& e, const mpz_class& c,
                       const std::vector<std::string>& vars, bool first) {
    mpz_class a = c;
    if (first) {
        if (a < 0) { out += "-"; a = -a; }
    } else {
        out += (a < 0) ? " - " : " + ";
        if (a < 0) a = -a;
    }
    bool has_var = false;
    for (size_t v = 0; v < vars.size(); ++v)
        if (e[v] > 0) has_var = true;
    if (!has_var) {
        out += a.get_str();
        return;
    }
    bool lead = true;
    if (a != 1) {
        out += a.get_str();
        lead = false;
    }
    for (size_t v = 0; v < vars.size(); ++v) {
        if (e[v] == 0) continue;
        if (!lead) out += "*";
        out += vars[v];
        if (e[v] > 1) out += "^" + std::to_string(e[v]);
        lead = false;
    }
}

std::string print_poly(const MPoly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    // highest grlex term first
    for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
        print_term(out, it->first, it->second, f.vars, first);
        first = false;
    }
    return out;
}

std::string print_poly(const Poly1& f) {
    return print_poly(from_poly1(f, 0, {f.var}));
}

} // namespace aet

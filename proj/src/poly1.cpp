#include "aet/poly1.hpp"

#include <algorithm>

namespace aet {

static const mpz_class Z0 = 0;

Poly1 Poly1::monomial(const mpz_class& c, int deg, std::string v) {
    if (c == 0 || deg < 0) return Poly1({}, std::move(v));
    std::vector<mpz_class> cs(deg + 1, Z0);
    cs[deg] = c;
    return Poly1(std::move(cs), std::move(v));
}

const mpz_class& Poly1::lc() const {
    if (coeff.empty()) throw invariant_error("lc of zero polynomial");
    return coeff.back();
}

void Poly1::trim() {
    while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
}

Poly1 operator+(const Poly1& a, const Poly1& b) {
    std::vector<mpz_class> c(std::max(a.coeff.size(), b.coeff.size()), Z0);
    for (size_t i = 0; i < a.coeff.size(); ++i) c[i] = a.coeff[i];
    for (size_t i = 0; i < b.coeff.size(); ++i) c[i] += b.coeff[i];
    return Poly1(std::move(c), a.var);
}

Poly1 operator-(const Poly1& a, const Poly1& b) {
    std::vector<mpz_class> c(std::max(a.coeff.size(), b.coeff.size()), Z0);
    for (size_t i = 0; i < a.coeff.size(); ++i) c[i] = a.coeff[i];
    for (size_t i = 0; i < b.coeff.size(); ++i) c[i] -= b.coeff[i];
    return Poly1(std::move(c), a.var);
}

Poly1 operator-(const Poly1& a) {
    Poly1 r = a;
    for (auto& c : r.coeff) c = -c;
    return r;
}

Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return Poly1({}, a.var);
    std::vector<mpz_class> c(a.coeff.size() + b.coeff.size() - 1, Z0);
    for (size_t i = 0; i < a.coeff.size(); ++i)
        for (size_t j = 0; j < b.coeff.size(); ++j)
            c[i + j] += a.coeff[i] * b.coeff[j];
    return Poly1(std::move(c), a.var);
}

Poly1 operator*(const mpz_class& s, const Poly1& a) {
    if (s == 0) return Poly1({}, a.var);
    Poly1 r = a;
    for (auto& c : r.coeff) c *= s;
    return r;
}

Poly1 derivative(const Poly1& f) {
    if (f.degree() <= 0) return Poly1({}, f.var);
    std::vector<mpz_class> c(f.coeff.size() - 1);
    for (size_t i = 1; i < f.coeff.size(); ++i) c[i - 1] = mpz_class(i) * f.coeff[i];
    return Poly1(std::move(c), f.var);
}

mpz_class eval(const Poly1& f, const mpz_class& x) {
    mpz_class r = 0;
    for (auto it = f.coeff.rbegin(); it != f.coeff.rend(); ++it) r = r * x + *it;
    return r;
}

mpq_class eval(const Poly1& f, const mpq_class& x) {
    mpq_class r = 0;
    for (auto it = f.coeff.rbegin(); it != f.coeff.rend(); ++it) r = r * x + *it;
    return r;
}

i64 eval_mod(const Poly1& f, i64 x, i64 m) {
    i64 r = 0;
    i64 xr = mod_reduce(x, m);
    for (auto it = f.coeff.rbegin(); it != f.coeff.rend(); ++it)
        r = (r * xr + mod_reduce(*it, m)) % m;
    return r;
}

mpz_class content(const Poly1& f) {
    mpz_class g = 0;
    for (const auto& c : f.coeff) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

Poly1 primitive_part(const Poly1& f) {
    mpz_class g = content(f);
    if (g == 0 || g == 1) return f;
    Poly1 r = f;
    for (auto& c : r.coeff) c /= g;
    return r;
}

Poly1 compose_linear(const Poly1& f, const mpz_class& b, const mpz_class& c) {
    // Horner: f(b x + c)
    Poly1 arg({c, b}, f.var);
    Poly1 r({}, f.var);
    for (auto it = f.coeff.rbegin(); it != f.coeff.rend(); ++it)
        r = r * arg + Poly1::constant(*it, f.var);
    return r;
}

// Bracket b means: g may have a real root in [b, b+1]. The returned set is a
// superset of the true brackets for roots inside [lo, hi].
static std::vector<mpz_class> real_root_brackets(const Poly1& g, const mpz_class& lo,
                                                 const mpz_class& hi) {
    std::vector<mpz_class> out;
    if (lo > hi || g.degree() <= 0) return out;
    if (g.degree() == 1) {
        // root at -c0/c1
        mpz_class b;
        mpz_fdiv_q(b.get_mpz_t(), mpz_class(-g.coeff[0]).get_mpz_t(), g.coeff[1].get_mpz_t());
        if (b >= lo - 1 && b <= hi) out.push_back(b);
        return out;
    }
    std::vector<mpz_class> crit = real_root_brackets(derivative(g), lo, hi);
    // Segment endpoints: g is strictly monotone on real intervals between
    // consecutive critical brackets.
    std::vector<mpz_class> pts;
    pts.push_back(lo);
    for (const auto& b : crit) {
        out.push_back(b);  // conservative: keep every critical bracket
        if (b >= lo) pts.push_back(b);
        if (b + 1 <= hi) pts.push_back(b + 1);
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        mpz_class a = pts[i], b = pts[i + 1];
        int sa = sgn(eval(g, a)), sb = sgn(eval(g, b));
        if (sa == 0) out.push_back(a);
        if (sa == 0 || sb == 0 || sa == sb) continue;
        // one sign change on a monotone segment: binary search the bracket
        while (b - a > 1) {
            mpz_class m = (a + b) / 2;
            int sm = sgn(eval(g, m));
            if (sm == 0) { a = m; b = m + 1; break; }
            if (sm == sa) a = m; else b = m;
        }
        out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<mpz_class> integer_roots_in_range(const Poly1& f, const mpz_class& lo,
                                              const mpz_class& hi) {
    std::vector<mpz_class> roots;
    if (lo > hi) return roots;
    if (f.is_zero()) throw invariant_error("integer_roots_in_range: zero polynomial");
    std::vector<mpz_class> brackets = real_root_brackets(f, lo, hi);
    brackets.push_back(lo);
    brackets.push_back(hi - 1);
    for (const auto& b : brackets) {
        if (b >= lo && b <= hi && eval(f, b) == 0) roots.push_back(b);
        mpz_class b1 = b + 1;
        if (b1 >= lo && b1 <= hi && eval(f, b1) == 0) roots.push_back(b1);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// ---------------------------------------------------------------------------

RatPoly1 RatPoly1::constant(const mpq_class& c, std::string v) {
    return RatPoly1({c}, std::move(v));
}

RatPoly1 RatPoly1::from_int(const Poly1& f) {
    std::vector<mpq_class> c(f.coeff.begin(), f.coeff.end());
    return RatPoly1(std::move(c), f.var);
}

const mpq_class& RatPoly1::lc() const {
    if (coeff.empty()) throw invariant_error("lc of zero polynomial");
    return coeff.back();
}

void RatPoly1::trim() {
    while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
}

void RatPoly1::make_monic() {
    if (is_zero()) return;
    mpq_class l = lc();
    for (auto& c : coeff) c /= l;
}

RatPoly1 operator+(const RatPoly1& a, const RatPoly1& b) {
    std::vector<mpq_class> c(std::max(a.coeff.size(), b.coeff.size()), mpq_class(0));
    for (size_t i = 0; i < a.coeff.size(); ++i) c[i] = a.coeff[i];
    for (size_t i = 0; i < b.coeff.size(); ++i) c[i] += b.coeff[i];
    return RatPoly1(std::move(c), a.var);
}

RatPoly1 operator-(const RatPoly1& a, const RatPoly1& b) {
    std::vector<mpq_class> c(std::max(a.coeff.size(), b.coeff.size()), mpq_class(0));
    for (size_t i = 0; i < a.coeff.size(); ++i) c[i] = a.coeff[i];
    for (size_t i = 0; i < b.coeff.size(); ++i) c[i] -= b.coeff[i];
    return RatPoly1(std::move(c), a.var);
}

RatPoly1 operator-(const RatPoly1& a) {
    RatPoly1 r = a;
    for (auto& c : r.coeff) c = -c;
    return r;
}

RatPoly1 operator*(const RatPoly1& a, const RatPoly1& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly1({}, a.var);
    std::vector<mpq_class> c(a.coeff.size() + b.coeff.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.coeff.size(); ++i)
        for (size_t j = 0; j < b.coeff.size(); ++j)
            c[i + j] += a.coeff[i] * b.coeff[j];
    return RatPoly1(std::move(c), a.var);
}

RatPoly1 operator*(const mpq_class& s, const RatPoly1& a) {
    if (s == 0) return RatPoly1({}, a.var);
    RatPoly1 r = a;
    for (auto& c : r.coeff) c *= s;
    return r;
}

RatPoly1 derivative(const RatPoly1& f) {
    if (f.degree() <= 0) return RatPoly1({}, f.var);
    std::vector<mpq_class> c(f.coeff.size() - 1);
    for (size_t i = 1; i < f.coeff.size(); ++i) c[i - 1] = mpq_class((long)i) * f.coeff[i];
    return RatPoly1(std::move(c), f.var);
}

mpq_class eval(const RatPoly1& f, const mpq_class& x) {
    mpq_class r = 0;
    for (auto it = f.coeff.rbegin(); it != f.coeff.rend(); ++it) r = r * x + *it;
    return r;
}

void divrem(const RatPoly1& a, const RatPoly1& b, RatPoly1& q, RatPoly1& r) {
    if (b.is_zero()) throw invariant_error("division by zero polynomial");
    r = a;
    q = RatPoly1({}, a.var);
    int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        int k = r.degree() - db;
        mpq_class c = r.lc() / b.lc();
        std::vector<mpq_class> mono(k + 1, mpq_class(0));
        mono[k] = c;
        RatPoly1 m(std::move(mono), a.var);
        q = q + m;
        r = r - m * b;
    }
}

RatPoly1 rat_gcd(const RatPoly1& a, const RatPoly1& b) {
    RatPoly1 x = a, y = b;
    while (!y.is_zero()) {
        RatPoly1 q, r;
        divrem(x, y, q, r);
        x = y;
        y = r;
    }
    x.make_monic();
    return x;
}

RatPoly1 divexact(const RatPoly1& a, const RatPoly1& b) {
    RatPoly1 q, r;
    divrem(a, b, q, r);
    if (!r.is_zero()) throw invariant_error("divexact: nonzero remainder");
    return q;
}

RatPoly1 squarefree_part(const RatPoly1& f) {
    if (f.is_zero()) throw invariant_error("squarefree_part of zero polynomial");
    if (f.degree() == 0) return RatPoly1::constant(1, f.var);
    RatPoly1 g = rat_gcd(f, derivative(f));
    RatPoly1 s = divexact(f, g);
    s.make_monic();
    return s;
}

Poly1 clear_denominators(const RatPoly1& f) {
    mpz_class den = 1;
    for (const auto& c : f.coeff)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> c(f.coeff.size());
    for (size_t i = 0; i < f.coeff.size(); ++i) {
        mpq_class v = f.coeff[i] * mpq_class(den);
        c[i] = v.get_num();
    }
    Poly1 r(std::move(c), f.var);
    return primitive_part(r);
}

} // namespace aet

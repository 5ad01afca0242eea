#include "aet/algebraic.hpp"

namespace aet {

NumberRing::NumberRing(RatPoly1 m) : modulus(std::move(m)) {
    if (modulus.degree() < 1)
        throw invariant_error("NumberRing: modulus must have degree >= 1");
    modulus.make_monic();
    RatPoly1 g = rat_gcd(modulus, derivative(modulus));
    if (g.degree() != 0)
        throw invariant_error("NumberRing: modulus must be squarefree");
}

AlgElem::AlgElem(RingPtr r, RatPoly1 v) : ring(std::move(r)), rep(std::move(v)) {
    RatPoly1 q, rem;
    divrem(rep, ring->modulus, q, rem);
    rep = std::move(rem);
}

AlgElem AlgElem::from_rational(const RingPtr& r, const mpq_class& q) {
    return AlgElem(r, RatPoly1::constant(q, r->modulus.var));
}

AlgElem AlgElem::generator(const RingPtr& r) {
    return AlgElem(r, RatPoly1({mpq_class(0), mpq_class(1)}, r->modulus.var));
}

mpq_class AlgElem::rational_value() const {
    if (rep.degree() > 0) throw invariant_error("rational_value of non-rational element");
    return rep.is_zero() ? mpq_class(0) : rep.coeff[0];
}

AlgElem operator+(const AlgElem& a, const AlgElem& b) {
    return AlgElem(a.ring, a.rep + b.rep);
}

AlgElem operator-(const AlgElem& a, const AlgElem& b) {
    return AlgElem(a.ring, a.rep - b.rep);
}

AlgElem operator-(const AlgElem& a) { return AlgElem(a.ring, -a.rep); }

AlgElem operator*(const AlgElem& a, const AlgElem& b) {
    return AlgElem(a.ring, a.rep * b.rep);
}

bool operator==(const AlgElem& a, const AlgElem& b) { return a.rep == b.rep; }

AlgElem AlgElem::inverse() const {
    if (is_zero()) throw invariant_error("inverse of zero");
    // extended Euclid on (rep, modulus)
    RatPoly1 r0 = ring->modulus, r1 = rep;
    RatPoly1 s0 = RatPoly1({}, rep.var), s1 = RatPoly1::constant(1, rep.var);
    while (!r1.is_zero()) {
        RatPoly1 q, r;
        divrem(r0, r1, q, r);
        RatPoly1 s = s0 - q * s1;
        r0 = r1; r1 = r;
        s0 = s1; s1 = s;
    }
    if (r0.degree() != 0) {
        RatPoly1 f = r0;
        f.make_monic();
        throw split_error(f);   // gcd(rep, modulus) is a proper factor
    }
    RatPoly1 inv = (mpq_class(1) / r0.coeff[0]) * s0;
    return AlgElem(ring, inv);
}

AlgElem reduce_into(const RingPtr& r, const RatPoly1& p) { return AlgElem(r, p); }

AlgElem alg_eval(const MPoly& f, const AlgElem& x, const AlgElem& y) {
    if (f.nvars != 2) throw invariant_error("alg_eval expects a bivariate polynomial");
    if (x.ring != y.ring && !(x.ring && y.ring && x.ring->modulus == y.ring->modulus))
        throw invariant_error("alg_eval: arguments must share a modulus");
    const RingPtr& R = x.ring;
    AlgElem acc = AlgElem::from_rational(R, 0);
    // power caches
    int dx = std::max(0, f.degree_in(0)), dy = std::max(0, f.degree_in(1));
    std::vector<AlgElem> px(dx + 1, AlgElem::from_rational(R, 1));
    std::vector<AlgElem> py(dy + 1, AlgElem::from_rational(R, 1));
    for (int i = 1; i <= dx; ++i) px[i] = px[i - 1] * x;
    for (int i = 1; i <= dy; ++i) py[i] = py[i - 1] * y;
    for (const auto& [e, c] : f.terms) {
        AlgElem t = AlgElem::from_rational(R, mpq_class(c));
        t = t * px[e[0]] * py[e[1]];
        acc = acc + t;
    }
    return acc;
}

AlgElem project(const AlgElem& a, const RingPtr& subring) {
    return AlgElem(subring, a.rep);
}

} // namespace aet

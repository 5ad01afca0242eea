#ifndef AET_ALGEBRAIC_HPP
#define AET_ALGEBRAIC_HPP

#include <memory>
#include <string>
#include <vector>

#include "aet/mpoly.hpp"
#include "aet/poly1.hpp"

namespace aet {

// Q[y]/(m) for a monic squarefree m. The modulus need not be irreducible:
// inverting a zero divisor raises split_error carrying the discovered factor,
// and the caller refines by gcd splitting.
struct NumberRing {
    RatPoly1 modulus;   // monic, squarefree
    explicit NumberRing(RatPoly1 m);
};

using RingPtr = std::shared_ptr<const NumberRing>;

struct split_error : std::runtime_error {
    RatPoly1 factor;    // proper monic factor of the modulus
    explicit split_error(RatPoly1 f)
        : std::runtime_error("zero divisor: modulus splits"), factor(std::move(f)) {}
};

class AlgElem {
public:
    RingPtr ring;
    RatPoly1 rep;       // degree < deg(modulus)

    AlgElem() = default;
    AlgElem(RingPtr r, RatPoly1 v);

    static AlgElem from_rational(const RingPtr& r, const mpq_class& q);
    static AlgElem generator(const RingPtr& r);   // the class of y

    bool is_zero() const { return rep.is_zero(); }
    bool is_rational() const { return rep.degree() <= 0; }
    mpq_class rational_value() const;             // requires is_rational()

    friend AlgElem operator+(const AlgElem& a, const AlgElem& b);
    friend AlgElem operator-(const AlgElem& a, const AlgElem& b);
    friend AlgElem operator-(const AlgElem& a);
    friend AlgElem operator*(const AlgElem& a, const AlgElem& b);
    friend bool operator==(const AlgElem& a, const AlgElem& b);

    AlgElem inverse() const;                      // throws split_error on zero divisor
};

AlgElem reduce_into(const RingPtr& r, const RatPoly1& p);

// Exact evaluation of a bivariate integer polynomial at algebraic arguments
// that share a modulus. Result is zero iff the modulus divides the evaluated
// expression.
AlgElem alg_eval(const MPoly& f, const AlgElem& x, const AlgElem& y);

// Remap an element of Q[y]/(m) into Q[y]/(factor) for a factor of m.
AlgElem project(const AlgElem& a, const RingPtr& subring);

} // namespace aet

#endif

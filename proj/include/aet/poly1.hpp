#ifndef AET_POLY1_HPP
#define AET_POLY1_HPP

#include <string>
#include <vector>

#include <gmpxx.h>

#include "aet/util.hpp"

namespace aet {

// Dense univariate polynomial over Z. coeff[i] is the coefficient of x^i;
// the vector never ends in a zero (degree of the zero polynomial is -1).
class Poly1 {
public:
    std::vector<mpz_class> coeff;
    std::string var = "x";

    Poly1() = default;
    explicit Poly1(std::vector<mpz_class> c, std::string v = "x")
        : coeff(std::move(c)), var(std::move(v)) { trim(); }
    static Poly1 constant(const mpz_class& c, std::string v = "x") {
        Poly1 p({c}, std::move(v));
        return p;
    }
    static Poly1 monomial(const mpz_class& c, int deg, std::string v = "x");

    int degree() const { return (int)coeff.size() - 1; }
    bool is_zero() const { return coeff.empty(); }
    const mpz_class& lc() const;
    mpz_class at(int i) const { return i >= 0 && i < (int)coeff.size() ? coeff[i] : mpz_class(0); }
    void trim();

    bool operator==(const Poly1& o) const { return coeff == o.coeff; }
};

Poly1 operator+(const Poly1& a, const Poly1& b);
Poly1 operator-(const Poly1& a, const Poly1& b);
Poly1 operator-(const Poly1& a);
Poly1 operator*(const Poly1& a, const Poly1& b);
Poly1 operator*(const mpz_class& s, const Poly1& a);

Poly1 derivative(const Poly1& f);
mpz_class eval(const Poly1& f, const mpz_class& x);
mpq_class eval(const Poly1& f, const mpq_class& x);
i64 eval_mod(const Poly1& f, i64 x, i64 m);   // m < 2^31

mpz_class content(const Poly1& f);            // gcd of coefficients, 0 for the zero poly
Poly1 primitive_part(const Poly1& f);

// f(b*x + c)
Poly1 compose_linear(const Poly1& f, const mpz_class& b, const mpz_class& c);

// All integer roots of f in [lo, hi], ascending. Uses the derivative chain to
// isolate monotone runs, then bisects each run; exact.
std::vector<mpz_class> integer_roots_in_range(const Poly1& f, const mpz_class& lo,
                                              const mpz_class& hi);

// -------------------------------------------------------------------------
// Rational univariate polynomials (coefficients kept canonical by mpq).
// -------------------------------------------------------------------------

class RatPoly1 {
public:
    std::vector<mpq_class> coeff;
    std::string var = "y";

    RatPoly1() = default;
    explicit RatPoly1(std::vector<mpq_class> c, std::string v = "y")
        : coeff(std::move(c)), var(std::move(v)) { trim(); }
    static RatPoly1 constant(const mpq_class& c, std::string v = "y");
    static RatPoly1 from_int(const Poly1& f);

    int degree() const { return (int)coeff.size() - 1; }
    bool is_zero() const { return coeff.empty(); }
    const mpq_class& lc() const;
    mpq_class at(int i) const { return i >= 0 && i < (int)coeff.size() ? coeff[i] : mpq_class(0); }
    void trim();
    void make_monic();

    bool operator==(const RatPoly1& o) const { return coeff == o.coeff; }
};

RatPoly1 operator+(const RatPoly1& a, const RatPoly1& b);
RatPoly1 operator-(const RatPoly1& a, const RatPoly1& b);
RatPoly1 operator-(const RatPoly1& a);
RatPoly1 operator*(const RatPoly1& a, const RatPoly1& b);
RatPoly1 operator*(const mpq_class& s, const RatPoly1& a);

RatPoly1 derivative(const RatPoly1& f);
mpq_class eval(const RatPoly1& f, const mpq_class& x);

// Division with remainder; b must be nonzero.
void divrem(const RatPoly1& a, const RatPoly1& b, RatPoly1& q, RatPoly1& r);
RatPoly1 rat_gcd(const RatPoly1& a, const RatPoly1& b);   // monic gcd
RatPoly1 divexact(const RatPoly1& a, const RatPoly1& b);  // throws if remainder != 0

// Monic squarefree part f / gcd(f, f').
RatPoly1 squarefree_part(const RatPoly1& f);

// Clear denominators and content: smallest integer multiple, primitive.
Poly1 clear_denominators(const RatPoly1& f);

} // namespace aet

#endif

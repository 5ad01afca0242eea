#ifndef AET_RESULTANT_HPP
#define AET_RESULTANT_HPP

#include <functional>
#include <string>
#include <vector>

#include "aet/mpoly.hpp"
#include "aet/poly1.hpp"

namespace aet {

// Res(f, g) as the Sylvester determinant, evaluated by fraction-free
// (Bareiss) elimination. Res with a nonzero constant c is c^deg(other side);
// Res involving the zero polynomial is 0 (unless both are nonzero constants,
// which gives 1).
mpz_class resultant(const Poly1& f, const Poly1& g);

// (-1)^{d(d-1)/2} Res(f, f') / lc(f), exact. Degree-1 inputs give 1.
// Rejects the zero polynomial.
mpz_class discriminant(const Poly1& f);

// Discriminant of a binary form F(x,y) of degree n, computed as the resultant
// of the two partial derivatives (binary forms of degree n-1). Vanishes
// exactly when F has a repeated linear factor over the algebraic closure.
mpz_class discriminant_form(const MPoly& F);

// -------------------------------------------------------------------------
// Polynomials in one main variable whose coefficients are integer
// polynomials in a single parameter.
// -------------------------------------------------------------------------
struct ParamPoly {
    std::vector<Poly1> coeff;   // coeff[i] in Z[param] multiplies main^i
    std::string main_var = "t";
    std::string param = "n";

    int main_degree() const;    // generic degree: max i with coeff[i] != 0
    Poly1 specialize(const mpz_class& value) const;   // in main_var
    static ParamPoly from_mpoly(const MPoly& f, int main_index, int param_index);
};

// Discriminant of F in its main variable as an exact polynomial in the
// parameter. Evaluation/interpolation: specializes at parameter points where
// the main-variable degree equals the generic degree, then reconstructs by
// exact Lagrange interpolation. Throws if every sampled point is degenerate.
Poly1 disc_in_param(const ParamPoly& F);

// Exact Lagrange interpolation of integer values at distinct integer nodes;
// throws if the interpolant is not integral.
Poly1 interpolate_integer(const std::vector<mpz_class>& xs,
                          const std::vector<mpz_class>& ys,
                          const std::string& var);

// Interpolate a bivariate integer polynomial from a callback on a grid.
// deg bounds are inclusive upper bounds on the degrees in each variable.
// node_ok(n) filters usable nodes for the first variable.
MPoly interpolate_bivariate(const std::function<mpz_class(const mpz_class&, const mpz_class&)>& f,
                            int deg1, int deg2,
                            const std::vector<std::string>& names,
                            const std::function<bool(const mpz_class&)>& node1_ok);

// Resultant of two bivariate integer polynomials with respect to variable
// `elim`, as a univariate polynomial in the other variable. Computed by
// specialization at nodes preserving the elim-degree of both inputs.
Poly1 resultant_bivariate(const MPoly& a, const MPoly& b, int elim);

// -------------------------------------------------------------------------
// Critical values of a bivariate polynomial: cv vanishes at every value
// f(r,s) attained at a common zero of both partial derivatives (over the
// algebraic closure). guard collects leading coefficients of the elimination
// chain; a prime dividing neither cv-resultants nor guard sees the same
// elimination after reduction.
// -------------------------------------------------------------------------
struct CriticalValues {
    Poly1 cv;           // squarefree, primitive, nonzero
    mpz_class guard = 1;
    bool empty = false; // no critical points over the algebraic closure
};

CriticalValues critical_value_polynomial(const MPoly& f);

} // namespace aet

#endif

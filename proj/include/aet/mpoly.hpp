#ifndef AET_MPOLY_HPP
#define AET_MPOLY_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "aet/poly1.hpp"
#include "aet/util.hpp"

namespace aet {

// Sparse integer polynomial in up to 4 named variables. Terms are keyed by
// exponent tuples in graded-lex order (total degree first, then lexicographic
// with variable 0 heaviest); zero coefficients are never stored.
class MPoly {
public:
    using Exp = std::array<int, 4>;

    struct GrlexLess {
        bool operator()(const Exp& a, const Exp& b) const {
            int da = a[0] + a[1] + a[2] + a[3];
            int db = b[0] + b[1] + b[2] + b[3];
            if (da != db) return da < db;
            return a < b;
        }
    };

    int nvars = 0;
    std::vector<std::string> vars;
    std::map<Exp, mpz_class, GrlexLess> terms;

    MPoly() = default;
    explicit MPoly(std::vector<std::string> names)
        : nvars((int)names.size()), vars(std::move(names)) {
        if (nvars < 1 || nvars > 4) throw invariant_error("MPoly supports 1..4 variables");
    }
    static MPoly constant(const mpz_class& c, std::vector<std::string> names);
    static MPoly variable(int index, std::vector<std::string> names);

    bool is_zero() const { return terms.empty(); }
    int total_degree() const;           // -1 for zero
    int degree_in(int v) const;         // -1 for zero
    void add_term(const Exp& e, const mpz_class& c);
    mpz_class coeff(const Exp& e) const;
    bool operator==(const MPoly& o) const { return terms == o.terms; }

    MPoly with_vars(std::vector<std::string> names) const;  // same terms, renamed
};

MPoly operator+(const MPoly& a, const MPoly& b);
MPoly operator-(const MPoly& a, const MPoly& b);
MPoly operator-(const MPoly& a);
MPoly operator*(const MPoly& a, const MPoly& b);
MPoly operator*(const mpz_class& s, const MPoly& a);

// Sum of the terms of total degree exactly i.
MPoly homogeneous_part(const MPoly& f, int i);

// gcd of all coefficients; errors on the zero polynomial.
mpz_class content(const MPoly& f);

mpz_class eval(const MPoly& f, const std::vector<mpz_class>& point);
mpq_class eval(const MPoly& f, const std::vector<mpq_class>& point);
i64 eval_mod(const MPoly& f, const std::vector<i64>& point, i64 m);

// Partial derivative with respect to variable v.
MPoly derivative(const MPoly& f, int v);

// Substitute univariate polynomials for each variable; result in subs[i].var.
Poly1 substitute1(const MPoly& f, const std::vector<Poly1>& subs);

// Homogenize to the given degree with a fresh variable appended.
MPoly homogenize(const MPoly& f, int degree, const std::string& wname);

// Specialize one variable to an integer; the variable stays in place with
// exponent 0.
MPoly substitute_value(const MPoly& f, int v, const mpz_class& value);

// Collect f as a dense univariate polynomial in variable v whose coefficients
// are MPoly in the remaining variables (same variable list, exponent of v 0).
std::vector<MPoly> collect(const MPoly& f, int v);

// Conversions. to_poly1 requires all variables but v to have exponent 0.
Poly1 to_poly1(const MPoly& f, int v);
MPoly from_poly1(const Poly1& f, int v, std::vector<std::string> names);

// -------------------------------------------------------------------------
// Expression grammar (spec'd): integer literals, named variables, + - * ^
// with nonnegative integer exponents, parentheses. Multiplication is always
// explicit; unary minus binds looser than ^.
// -------------------------------------------------------------------------
MPoly parse_poly(const std::string& text, const std::vector<std::string>& vars);
Poly1 parse_poly1(const std::string& text, const std::string& var);

// Canonical printer: graded-lex term order (highest first), explicit * and ^.
// parse(print(f)) == f.
std::string print_poly(const MPoly& f);
std::string print_poly(const Poly1& f);

} // namespace aet

#endif

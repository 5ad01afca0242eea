#ifndef AET_CONGRUENCE_HPP
#define AET_CONGRUENCE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aet/mpoly.hpp"
#include "aet/poly1.hpp"
#include "aet/util.hpp"

namespace aet {

struct CongruenceQuery {
    Poly1 Q;
    i64 p = 2;
    int l = 1;
};

// #{x in Z/p^l : Q(x) = 0}. Hensel tree: roots mod p are found by scan,
// nonsingular roots lift uniquely, singular roots branch into all p children
// (with a content shortcut: once p^c divides the shifted polynomial the whole
// subtree of depth <= c counts in one step).
mpz_class count_roots_mod_prime_power(const CongruenceQuery& q,
                                      const Budget& budget = Budget{});

// #{x in Z/p^l : p^m | A x + B} for p not dividing A.
mpz_class count_linear_congruence(const mpz_class& A, const mpz_class& B,
                                  i64 p, int l, int m);

// ---------------------------------------------------------------------------
// Nonzero integer certificate for mod-p lines inside {f = k}: if the curve
// contains the line M x + N y = tau over an algebraic closure of F_p (p large
// in terms of d, p not dividing (M,N)), then p divides the certificate value.
// ---------------------------------------------------------------------------
enum class DeltaCase { LeadingForm, PartialDerivative, EJNumerator, E0MinusK };

struct DeltaCertificate {
    DeltaCase kind;
    mpz_class value;                 // nonzero
    std::vector<mpz_class> A;        // A_j numerators (index j), when computed
    std::vector<mpz_class> B;        // B_j denominators
    int J = -1;                      // maximal j >= 1 with E_j != 0, if any
    bool swapped = false;            // roles of M and N exchanged (N was 0)
    double bound_ratio = 0.0;        // |value| / (|k| max(|M|,|N|)^{d^2})
};

const char* delta_case_name(DeltaCase c);

// f bivariate of degree d with smooth squarefree top form; (M,N) not both 0.
// Case cascade: f_d(N,-M) when nonzero; otherwise the E_j ladder evaluated
// exactly over Q and cleared to integers. In the ladder cases the partial
// derivative (d f_d/dy)(N,-M) is carried as a factor of the certificate so
// that a single integer covers both the derivative and the numerator events.
DeltaCertificate delta_f(const MPoly& f, const mpz_class& k,
                         const mpz_class& M, const mpz_class& N);

// ---------------------------------------------------------------------------
// Partial sums of Phi(h;M,N)/|h|^{2-1/d+eps} over 0 < |h| <= H, with the
// comparison value Delta_f^eps * H^eps. Phi evaluation is delegated to the
// finite-field module via a callback to keep the dependency one-way.
// ---------------------------------------------------------------------------
struct PhiPartialSum {
    double value = 0.0;        // the partial sum
    double comparison = 0.0;   // Delta_f(M,N,k)^eps * H^eps
    long terms = 0;
};

PhiPartialSum phi_partial_sum(const std::function<double(i64)>& phi_abs_at_h,
                              const mpz_class& delta_value, int d, i64 H, double eps);

} // namespace aet

#endif

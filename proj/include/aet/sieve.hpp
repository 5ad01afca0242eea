#ifndef AET_SIEVE_HPP
#define AET_SIEVE_HPP

#include <array>
#include <complex>
#include <vector>

#include "aet/energy.hpp"
#include "aet/ffield.hpp"
#include "aet/util.hpp"

namespace aet {

// Sieve coefficient table for the polynomial sieve inequality.
// Note: the (2,0)/(0,2) entries of the display do not factor together with
// the rest; detector_weights below carries the factorized variant whose
// alpha = 1 choice cancels the main term.
std::array<std::array<mpz_class, 3>, 3> c_table(int alpha, int d);

// e = (alpha - d, 1 + d, -1): sum_i e_i v^i = alpha - (v - 1)(v - d).
std::array<mpz_class, 3> detector_weights(int alpha, int d);

struct SieveContext {
    SieveSurface surface;
    i64 Q = 10;
    int alpha = 1;
    std::vector<i64> primes;   // admissible primes <= Q
};

SieveContext make_sieve_context(const GeneralInstance& inst, const mpz_class& h,
                                i64 Q, int alpha = 1);

// S_{i,j}(p,q) = sum over the congruenced box of v_p^i v_q^j, by direct scan.
mpz_class s_ij_direct(const SieveSurface& s, int i, int j, i64 p, i64 q,
                      const Budget& budget = Budget{});

// Completed form: (1/(pq h)^2) sum over |m|,|n| <= pq|h|/2 of
// Gamma(B,m) Gamma(B,n) Psi_{i,j}(m,n), with Gamma in closed geometric form
// and Psi through the CRT factorization.
struct CompletedSum {
    double value = 0.0;
    double imag_residual = 0.0;
    u64 terms = 0;
};

CompletedSum s_ij_completed(const SieveSurface& s, int i, int j, i64 p, i64 q);

// Gamma(B, m) for the modulus P: sum_{1<=l<=B} e(-m l / P).
std::complex<double> gamma_completion(i64 B, i64 m, i64 P);

struct SievePairTerm {
    i64 p, q;
    double combined;   // |sum_{i,j} c_{i,j}(alpha) S_{i,j}(p,q)|
};

struct SieveReport {
    mpz_class h;
    i64 Q;
    int alpha;
    std::size_t primes_used;
    mpz_class lhs;                  // detected points of the congruenced box
    double rhs;                     // (1/#P^2) sum over pairs
    double ratio;                   // lhs / rhs
    double main_display_alpha;      // main (m,n)=(0,0) term, display table
    double main_display_alpha0;
    double detector_main_alpha;     // main term under factorized weights
    double detector_main_alpha0;
    double cancellation_ratio;      // |detector at alpha| / |detector at 0|
    std::vector<SievePairTerm> per_pair;
};

SieveReport sieve_bound(const SieveContext& ctx, const Budget& budget = Budget{});

// ---------------------------------------------------------------------------
// Exponent bookkeeping for the final comparisons.
// ---------------------------------------------------------------------------
struct ExponentSummary {
    int d;
    mpq_class sieve_exponent;       // 2 - 1/(3d)
    double determinant_exponent;    // 1 + max(1/2, 2/sqrt d + 1/(d-1) - 1/((d-2) sqrt d))
    mpq_class target;               // 2 - 1/(50d)
    bool sieve_below_target;        // exact rational comparison
    bool determinant_below_target;  // d >= 5 only; true otherwise
    bool balance_identity;          // 2/(3d) + 2 - 1/d == 2 - 1/(3d), exact
};

ExponentSummary exponent_calculator(int d);

// Verifies the summary for every 3 <= d <= dmax; returns the first failing d
// or 0 when all pass.
int exponent_sweep(int dmax);

} // namespace aet

#endif

#ifndef AET_FFIELD_HPP
#define AET_FFIELD_HPP

#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "aet/energy.hpp"
#include "aet/mpoly.hpp"
#include "aet/poly1.hpp"
#include "aet/util.hpp"

namespace aet {

struct PrimeField {
    i64 p;
    explicit PrimeField(i64 prime) : p(prime) {
        if (p < 2 || !is_prime_u64((u64)p)) throw invariant_error("PrimeField: p must be prime");
    }
};

// F_{p^j} as F_p[t]/(m) with m monic irreducible, found by deterministic
// lexicographic search and verified by gcd(x^{p^i} - x, m) = 1 for i < j.
class ExtField {
public:
    i64 p;
    int j;
    std::vector<i64> modulus;   // monic, degree j (length j+1)

    ExtField(i64 prime, int degree);

    u64 size() const;                          // p^j
    using Elem = std::vector<i64>;             // length j, coefficients mod p
    Elem decode(u64 index) const;              // base-p digits
    u64 encode(const Elem& e) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem from_int(const mpz_class& c) const;
    Elem eval(const MPoly& F, const std::vector<Elem>& point) const;
    bool is_zero(const Elem& e) const;
};

// Roots of Q over F_p (distinct count). Evaluation scan below 2^14, else the
// degree of gcd(x^p - x, Q) computed with modular exponentiation in F_p[x]/Q.
// A specialization that vanishes identically mod p counts p roots when
// degenerate_ok is set, and errors otherwise.
int local_count_vp(const Poly1& Q, i64 p, bool degenerate_ok = false);

// ---------------------------------------------------------------------------
// The transformed surface of a counting instance at fixed nonzero h:
//   scale = (2ab)^{d-1}
//   A(z)  = scale * h * g((z+h)/2a, (z-h)/2b)          (integer coefficients)
//   K(x,y,z,w): projectivisation of scale*f(x,y) - A(z) - scale*k
//   P(x,y,w):   projectivisation of [A(x) - A(y)]/(x - y)
// The detection polynomial for the sieve is F(x; X1, X2) =
//   A(x) + scale*k - scale*f(X1,X2), with x-leading coefficient
//   h*g_{d-1}(b,a).
// ---------------------------------------------------------------------------
struct SieveSurface {
    GeneralInstance inst;
    mpz_class h;
    mpz_class scale;
    Poly1 A;
    MPoly K;   // 4 variables x,y,z,w
    MPoly P;   // 3 variables x,y,w
    mpz_class g_lead;       // g_{d-1}(b,a)
    mpz_class exclusion;    // nonzero; admissible primes do not divide it
};

SieveSurface build_sieve_surface(const GeneralInstance& inst, const mpz_class& h);

bool admissible_prime(const SieveSurface& s, i64 p);
std::vector<i64> admissible_primes(const SieveSurface& s, i64 Q);

// Per-prime lookup tables: v_p(X1,X2) = #{x mod p : A(x) = scale*(f(X1,X2)-k)},
// realized as a root-count histogram of A plus the congruence value map.
struct LocalCounts {
    i64 p;
    std::vector<int> roots_by_value;   // size p
    std::vector<int> v;                // size p*p, index x*p + y (residues)
    int vmax = 0;
};

LocalCounts local_count_table(const SieveSurface& s, i64 p);

struct ExpSumValue {
    double re = 0.0, im = 0.0;
    std::optional<mpz_class> exact;   // set when the sum is an integer by construction
    u64 summands = 0;
    double millis = 0.0;

    std::complex<double> value() const { return {re, im}; }
};

// Sigma_t(p; M, N) = sum over (x,y) in F_p^2 of v_p(x,y)^t e((Mx+Ny)/p).
ExpSumValue sigma_t(const SieveSurface& s, int t, i64 p, i64 M, i64 N);
ExpSumValue sigma_t(const LocalCounts& tab, int t, i64 M, i64 N);

// All values Sigma_1(p; M, N) on the full (M,N) grid, row-factored (O(p^3)).
std::vector<std::complex<double>> sigma1_grid(const LocalCounts& tab);

// Phi(h; M, N) over the congruenced residue box mod h (h >= 1).
ExpSumValue phi_sum(const GeneralInstance& inst, i64 h, i64 M, i64 N);

// Psi_{i,j}(m,n) for the pair (p,q) at the surface's h: direct evaluation
// over residues mod pq|h|, and the CRT-factored form. gcd(pq, h) must be 1.
struct PsiContext {
    const SieveSurface* surface;
    i64 p, q;
    i64 modulus;                       // pq|h|
    std::vector<std::pair<i64, i64>> members;   // congruenced residues (r,s)
    std::vector<int> vp, vq;           // member-aligned local counts
};

PsiContext make_psi_context(const SieveSurface& s, i64 p, i64 q);
ExpSumValue psi_direct(const PsiContext& ctx, int i, int j, i64 m, i64 n);
ExpSumValue psi_factored(const SieveSurface& s, int i, int j, i64 m, i64 n, i64 p, i64 q);

// ---------------------------------------------------------------------------
// Hooley-style moment statistics: per-tau counts of F over a constrained
// affine set, plus the centered second moment against a caller-supplied
// expected value.
// ---------------------------------------------------------------------------
struct MomentStatistic {
    std::vector<u64> counts;    // indexed by encoded tau in F_{p^j}
    double second_moment = 0.0; // sum over tau |N_j(tau) - N_j|^2
    u64 points = 0;             // points satisfying the constraints
};

MomentStatistic moment_statistic(const MPoly& F, const std::vector<MPoly>& constraints,
                                 const ExtField& field, double expected,
                                 const Budget& budget = Budget{});

// #points of a homogeneous form's zero locus in P^{nvars-1}(F_p).
u64 projective_point_count(const MPoly& form, i64 p, const Budget& budget = Budget{});

// ---------------------------------------------------------------------------
// Combinatorial multiplicities in the sigma_t decomposition by the number of
// distinct z-values, derived by exhaustive enumeration at a small prime.
// counts[s] = tuple count with exactly s distinct values; bases[s] = count of
// ordered distinct value systems; the multiplicity is their exact quotient.
// ---------------------------------------------------------------------------
struct SigmaCombinatorics {
    int t;
    mpz_class tuples_sigma[5];   // index s = 1..t (<= 4)
    mpz_class bases_sigma[5];
    long multiplicity[5];        // tuples/bases where defined, else 0
};

SigmaCombinatorics sigma_combinatorics(const SieveSurface& s, i64 p, int t);

} // namespace aet

#endif

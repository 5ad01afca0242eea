#ifndef AET_GEOMETRY_HPP
#define AET_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "aet/algebraic.hpp"
#include "aet/energy.hpp"
#include "aet/mpoly.hpp"
#include "aet/poly1.hpp"
#include "aet/resultant.hpp"

namespace aet {

// ---------------------------------------------------------------------------
// Lines in level sets {f(x,y) = l}. Slope candidates live per squarefree
// factor of f_d(1,y): alpha is the residue class of y, beta and the level are
// determined by the top two homogeneous parts. A family is genuine when the
// identity f(t, alpha t + beta) = level holds on its whole factor.
// ---------------------------------------------------------------------------
struct SlopeFamily {
    RingPtr ring;
    AlgElem alpha, beta, level;
    bool genuine;
};

struct VerticalLine {
    bool exists = false;     // requires f_d(0,1) = 0
    mpq_class gamma = 0;
    mpq_class level = 0;
    bool genuine = false;
};

struct LevelLineReport {
    std::vector<SlopeFamily> families;
    VerticalLine vertical;
};

LevelLineReport classify_level_lines(const MPoly& f);

// Root-of-unity line search for the energy curve {p(x) - p(y) = k}: candidates
// alpha with alpha^d = 1 and beta = a_{d-1}(alpha - 1)/(d a_d).
struct CurveLineSearch {
    bool any_line = false;            // over the algebraic closure
    std::vector<SlopeFamily> lines;   // genuine families (factor moduli)
    int candidates_checked = 0;
};

CurveLineSearch rational_line_check(const Poly1& p, const mpz_class& k);

// All lines of {f = k} definable over Q (rational slope/offset or vertical).
struct RationalLine {
    bool vertical = false;
    mpq_class alpha = 0, beta = 0;   // x2 = alpha x1 + beta
    mpq_class gamma = 0;             // x1 = gamma (vertical)
};

std::vector<RationalLine> find_rational_lines(const MPoly& f, const mpz_class& k);

// Exact decision procedure for the counting problem's smoothness and
// no-line hypotheses.
struct HypothesisReport {
    bool no_rational_line = false;      // (1)
    bool fd_squarefree = false;         // (2)
    bool mixed_form_squarefree = false; // (3) (a x - b y) g_{d-1} squarefree
    bool gradient_squarefree = true;    // (4), checked when d = 4
    MPoly gradient_form;                // the cleared d=4 gradient form
    bool all() const {
        return no_rational_line && fd_squarefree && mixed_form_squarefree &&
               gradient_squarefree;
    }
};

HypothesisReport check_hypotheses(const GeneralInstance& inst);

// ---------------------------------------------------------------------------
// Lines on the slices x4 = n of the counting hypersurface.
// ---------------------------------------------------------------------------
struct GammaLineEntry {
    int case_id;               // 1 slope-in-level, 2 vertical-in-level, 3 at-most-one
    std::string description;
    mpz_class integer_points;  // inside [1,B]^3 (cases 1-2; 0 for case 3)
};

struct GammaLineReport {
    i64 n;
    std::vector<GammaLineEntry> entries;
    mpz_class points_cases12 = 0;
};

GammaLineReport gamma_n_line_report(const GeneralInstance& inst, i64 n);

// ---------------------------------------------------------------------------
// Parametric singularity censuses. The census polynomial is the elimination
// of the per-family singularity system against the critical values of f; its
// integer roots inside the window are the only parameters where the family
// member can be singular. The leading coefficient of the parametric
// discriminant is exact and compared against the limit form.
// ---------------------------------------------------------------------------
enum class CensusFamily { Gamma, K, P };

struct SingularCensus {
    CensusFamily family;
    std::string parameter;              // "n" or "h"
    Poly1 disc_polynomial;              // eliminated census polynomial
    mpz_class leading_coefficient;      // of the parametric discriminant
    mpz_class predicted_leading;        // limit formula
    std::vector<mpz_class> integer_roots;
    std::vector<mpz_class> degenerate_values;  // degree drops, w=0 special cases
    mpz_class guard = 1;                // elimination guard product
};

SingularCensus singular_census(const GeneralInstance& inst, CensusFamily fam, i64 B);

// Per-slice prime-exclusion integer for the soundness scan: primes outside it
// cannot see a singular reduction of a slice the census calls smooth.
mpz_class gamma_slice_exclusion(const GeneralInstance& inst, const SingularCensus& census,
                                i64 n);

// The projectivised slice  f(x1,x2) - (a x3 - b n) g(x3, n) - k, degree-d
// form in (x1, x2, x3, w).
MPoly gamma_slice_form(const GeneralInstance& inst, i64 n);

// First projective F_p-singular point of a form, if any (representatives
// [1:*:..:*], [0:1:*:..], ...).
std::optional<std::vector<i64>> projective_singular_point(const MPoly& form, i64 p);

} // namespace aet

#endif

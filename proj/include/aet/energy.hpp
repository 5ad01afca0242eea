#ifndef AET_ENERGY_HPP
#define AET_ENERGY_HPP

#include <map>
#include <string>
#include <vector>

#include "aet/mpoly.hpp"
#include "aet/poly1.hpp"
#include "aet/util.hpp"

namespace aet {

// Counting problem for f(x1)+f(x2) = f(x3)+f(x4) + k over {1..B}^4.
struct EnergyInstance {
    Poly1 f;          // degree >= 3
    mpz_class k;
    i64 B = 1;

    void validate() const;
};

// Counting problem for f(x1,x2) = (a x3 - b x4) g(x3,x4) + k over {1..B}^4.
struct GeneralInstance {
    MPoly f;          // degree d, zero constant term
    MPoly g;          // degree d - 1
    mpz_class a = 1, b = 1, k = 1;
    i64 B = 1;

    int degree() const { return f.total_degree(); }
    void validate() const;
};

// f = p(x) - p(y), g the exact cofactor by (x - y); counts agree with the
// energy counts of p.
GeneralInstance energy_to_general(const Poly1& p, const mpz_class& k, i64 B);

struct CountResult {
    mpz_class count;
    std::string algorithm;
    double millis = 0.0;
    bool zero_flagged = false;   // used by scans when a count was zero
};

CountResult energy_bruteforce(const EnergyInstance& inst, const Budget& budget = Budget{});
CountResult energy_mitm(const EnergyInstance& inst, const Budget& budget = Budget{},
                        unsigned threads = 1);
CountResult general_count(const GeneralInstance& inst, const Budget& budget = Budget{});

// Full histogram k -> E_f(B;k) over every k with a nonzero count.
std::map<mpz_class, mpz_class> energy_histogram(const EnergyInstance& inst,
                                                const Budget& budget = Budget{});

// #{(x,y) in {1..B}^2 : F(x,y) = l}, x-major scan with exact integer root
// extraction of each univariate slice.
CountResult curve_count_in_box(const MPoly& F, const mpz_class& l, i64 B,
                               const Budget& budget = Budget{});

// Least-squares fit of log(count) against log(B). Zero counts are dropped
// and flagged; fewer than two nonzero points is an error.
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int used_points = 0;
    int dropped_zeros = 0;
};

ExponentFit fit_exponent(const std::vector<std::pair<double, mpz_class>>& data);

struct ScanPoint {
    i64 B;
    mpz_class count;
    double millis;
};

// Runs the meet-in-the-middle counter over an increasing list of box sizes.
std::vector<ScanPoint> exponent_scan(const Poly1& f, const mpz_class& k,
                                     const std::vector<i64>& Bs,
                                     const Budget& budget = Budget{},
                                     unsigned threads = 1);

} // namespace aet

#endif

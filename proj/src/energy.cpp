#include "aet/energy.hpp"

#include <algorithm>
#include <cmath>

namespace aet {

void EnergyInstance::validate() const {
    if (f.degree() < 3) throw invariant_error("EnergyInstance: deg f >= 3 required");
    if (B < 1) throw invariant_error("EnergyInstance: B >= 1 required");
}

void GeneralInstance::validate() const {
    if (f.nvars != 2 || g.nvars != 2)
        throw invariant_error("GeneralInstance: f, g must be bivariate");
    int d = f.total_degree();
    if (d < 1 || g.total_degree() != d - 1)
        throw invariant_error("GeneralInstance: deg g must be deg f - 1");
    if (f.coeff({0, 0, 0, 0}) != 0)
        throw invariant_error("GeneralInstance: f must have zero constant term");
    if (a == 0 || b == 0 || k == 0)
        throw invariant_error("GeneralInstance: a*b*k must be nonzero");
    if (B < 1) throw invariant_error("GeneralInstance: B >= 1 required");
}

GeneralInstance energy_to_general(const Poly1& p, const mpz_class& k, i64 B) {
    std::vector<std::string> xy{"x", "y"};
    MPoly f(xy);
    // f(x,y) = p(x) - p(y); g = sum_i a_i (x^{i-1} + x^{i-2} y + ... + y^{i-1})
    MPoly g(xy);
    for (int i = 0; i <= p.degree(); ++i) {
        if (p.coeff[i] == 0) continue;
        f.add_term({i, 0, 0, 0}, p.coeff[i]);
        f.add_term({0, i, 0, 0}, -p.coeff[i]);
        for (int m = 0; m < i; ++m) g.add_term({m, i - 1 - m, 0, 0}, p.coeff[i]);
    }
    GeneralInstance inst;
    inst.f = f;
    inst.g = g;
    inst.a = 1;
    inst.b = 1;
    inst.k = k;
    inst.B = B;
    return inst;
}

namespace {

// Largest |f(x)| over 1..B (coarse bound via coefficient sizes).
mpz_class value_bound(const Poly1& f, i64 B) {
    mpz_class bound = 0, Bp = 1;
    for (int i = 0; i <= f.degree(); ++i) {
        bound += abs(f.coeff[i]) * Bp;
        Bp *= B;
    }
    return bound;
}

bool fits_fast_path(const mpz_class& bound) {
    // pair sums must fit comfortably in __int128
    static const mpz_class limit = []() {
        mpz_class t = 1;
        t <<= 124;
        return t;
    }();
    return bound < limit;
}

i128 to_i128(const mpz_class& v) {
    // |v| < 2^124 by the fast-path guard
    mpz_class a = abs(v);
    u128 r = 0;
    mpz_class hi = a >> 64;
    mpz_class lo = a - (hi << 64);
    r = ((u128)hi.get_ui() << 64) | lo.get_ui();
    return v < 0 ? -(i128)r : (i128)r;
}

// Sorted multiset of pair sums f(x)+f(y) over {1..B}^2 (fast path only).
std::vector<i128> pair_sums(const Poly1& f, i64 B, const Budget& budget,
                            unsigned threads) {
    budget.check_items((u64)B * B, "pair sums");
    budget.check_bytes((u64)B * B * sizeof(i128), "pair sums");
    std::vector<i128> vals((size_t)B);
    for (i64 x = 1; x <= B; ++x) vals[x - 1] = to_i128(eval(f, mpz_class((long)x)));
    std::vector<i128> sums((size_t)B * B);
    parallel_chunks<int>((u64)B, 64, threads,
        [&](u64, u64 lo, u64 hi, int&) {
            for (u64 i = lo; i < hi; ++i)
                for (u64 j = 0; j < (u64)B; ++j)
                    sums[i * B + j] = vals[i] + vals[j];
        },
        [](u64, int&) {});
    std::sort(sums.begin(), sums.end());
    return sums;
}

// run-length view over a sorted vector
struct Runs {
    std::vector<i128> value;
    std::vector<u64> mult;
};

Runs to_runs(const std::vector<i128>& sorted) {
    Runs r;
    for (size_t i = 0; i < sorted.size();) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        r.value.push_back(sorted[i]);
        r.mult.push_back(j - i);
        i = j;
    }
    return r;
}

// sum over s of multL(s) * multR(s - k), galloping over the two run lists
mpz_class count_offset_matches(const Runs& L, const Runs& R, i128 k) {
    mpz_class total = 0;
    size_t i = 0, j = 0;
    while (i < L.value.size() && j < R.value.size()) {
        i128 want = L.value[i] - k;
        if (R.value[j] < want) {
            // gallop forward in R
            size_t step = 1, pos = j;
            while (pos + step < R.value.size() && R.value[pos + step] < want) step <<= 1;
            j = std::lower_bound(R.value.begin() + pos,
                                 R.value.begin() + std::min(R.value.size(), pos + step + 1),
                                 want) - R.value.begin();
            continue;
        }
        if (R.value[j] > want) { ++i; continue; }
        total += mpz_class((unsigned long)L.mult[i]) * mpz_class((unsigned long)R.mult[j]);
        ++i; ++j;
    }
    return total;
}

} // namespace

CountResult energy_bruteforce(const EnergyInstance& inst, const Budget& budget) {
    inst.validate();
    StopWatch sw;
    const i64 B = inst.B;
    u64 quads = 1;
    for (int i = 0; i < 4; ++i) quads *= (u64)B;
    budget.check_items(quads, "brute force quadruples");
    std::vector<mpz_class> vals((size_t)B);
    for (i64 x = 1; x <= B; ++x) vals[x - 1] = eval(inst.f, mpz_class((long)x));
    mpz_class total = 0, lhs, rhs;
    for (i64 a = 0; a < B; ++a)
        for (i64 b = 0; b < B; ++b) {
            lhs = vals[a] + vals[b] - inst.k;
            for (i64 c = 0; c < B; ++c) {
                rhs = lhs - vals[c];
                for (i64 d = 0; d < B; ++d)
                    if (rhs == vals[d]) ++total;
            }
        }
    CountResult r{total, "bruteforce", sw.ms(), false};
    return r;
}

CountResult energy_mitm(const EnergyInstance& inst, const Budget& budget,
                        unsigned threads) {
    inst.validate();
    StopWatch sw;
    mpz_class bound = 2 * value_bound(inst.f, inst.B) + abs(inst.k);
    if (!fits_fast_path(bound))
        throw budget_error("energy_mitm: values exceed the machine-word fast path; "
                           "use bruteforce or a smaller box");
    std::vector<i128> sums = pair_sums(inst.f, inst.B, budget, threads);
    Runs runs = to_runs(sums);
    mpz_class total = count_offset_matches(runs, runs, to_i128(inst.k));
    CountResult r{total, "mitm", sw.ms(), false};
    return r;
}

std::map<mpz_class, mpz_class> energy_histogram(const EnergyInstance& inst,
                                                const Budget& budget) {
    inst.validate();
    mpz_class bound = 2 * value_bound(inst.f, inst.B);
    if (!fits_fast_path(bound))
        throw budget_error("energy_histogram: values exceed the fast path");
    std::vector<i128> sums = pair_sums(inst.f, inst.B, budget, 1);
    Runs runs = to_runs(sums);
    const size_t D = runs.value.size();
    budget.check_items((u64)D * D, "histogram pairs");
    std::map<mpz_class, mpz_class> hist;
    auto z = [](i128 v) {
        bool neg = v < 0;
        u128 a = neg ? -(u128)v : (u128)v;
        mpz_class hi((unsigned long)(a >> 64)), lo((unsigned long)(a & ~0ull));
        mpz_class r = (hi << 64) + lo;
        return neg ? mpz_class(-r) : r;
    };
    for (size_t i = 0; i < D; ++i)
        for (size_t j = 0; j < D; ++j) {
            mpz_class k = z(runs.value[i] - runs.value[j]);
            hist[k] += mpz_class((unsigned long)runs.mult[i]) *
                       mpz_class((unsigned long)runs.mult[j]);
        }
    return hist;
}

CountResult general_count(const GeneralInstance& inst, const Budget& budget) {
    inst.validate();
    StopWatch sw;
    const i64 B = inst.B;
    budget.check_items(2 * (u64)B * B, "general pair values");
    // left multiset: f(x1,x2); right multiset: (a x3 - b x4) g(x3,x4) + k
    std::vector<mpz_class> lhs, rhs;
    lhs.reserve((size_t)B * B);
    rhs.reserve((size_t)B * B);
    std::vector<mpz_class> pt(2);
    for (i64 x = 1; x <= B; ++x)
        for (i64 y = 1; y <= B; ++y) {
            pt[0] = (long)x;
            pt[1] = (long)y;
            lhs.push_back(eval(inst.f, pt));
            rhs.push_back((inst.a * (long)x - inst.b * (long)y) * eval(inst.g, pt) + inst.k);
        }
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    mpz_class total = 0;
    size_t i = 0, j = 0;
    while (i < lhs.size() && j < rhs.size()) {
        if (lhs[i] < rhs[j]) { ++i; continue; }
        if (rhs[j] < lhs[i]) { ++j; continue; }
        size_t i2 = i, j2 = j;
        while (i2 < lhs.size() && lhs[i2] == lhs[i]) ++i2;
        while (j2 < rhs.size() && rhs[j2] == rhs[j]) ++j2;
        total += mpz_class((unsigned long)(i2 - i)) * mpz_class((unsigned long)(j2 - j));
        i = i2;
        j = j2;
    }
    CountResult r{total, "general-mitm", sw.ms(), false};
    return r;
}

CountResult curve_count_in_box(const MPoly& F, const mpz_class& l, i64 B,
                               const Budget& budget) {
    if (F.is_zero()) throw invariant_error("curve_count_in_box: F must be nonzero");
    if (F.nvars != 2) throw invariant_error("curve_count_in_box: F must be bivariate");
    if (F.total_degree() == 0) throw invariant_error("curve_count_in_box: F constant");
    budget.check_items((u64)B, "curve scan columns");
    StopWatch sw;
    std::vector<MPoly> cols = collect(F, 1);   // coefficients in x of powers of y
    mpz_class total = 0;
    for (i64 x = 1; x <= B; ++x) {
        // univariate slice in y
        std::vector<mpz_class> c(cols.size());
        for (size_t j = 0; j < cols.size(); ++j)
            c[j] = eval(to_poly1(cols[j], 0), mpz_class((long)x));
        Poly1 slice(std::move(c), "y");
        slice = slice - Poly1::constant(l, "y");
        if (slice.is_zero()) {
            total += B;   // every y on this column
            continue;
        }
        if (slice.degree() == 0) continue;
        total += (long)integer_roots_in_range(slice, 1, B).size();
    }
    CountResult r{total, "curve-scan", sw.ms(), false};
    return r;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, mpz_class>>& data) {
    ExponentFit fit;
    std::vector<double> xs, ys;
    for (const auto& [B, count] : data) {
        if (count == 0) { ++fit.dropped_zeros; continue; }
        xs.push_back(std::log(B));
        ys.push_back(std::log(count.get_d()));
    }
    fit.used_points = (int)xs.size();
    if (xs.size() < 2) throw invariant_error("fit_exponent: fewer than 2 nonzero counts");
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double rss = 0;
    for (size_t i = 0; i < n; ++i) {
        double e = ys[i] - (fit.slope * xs[i] + fit.intercept);
        rss += e * e;
    }
    if (n > 2)
        fit.stderr_slope = std::sqrt(rss / (n - 2) / (sxx - sx * sx / n));
    return fit;
}

std::vector<ScanPoint> exponent_scan(const Poly1& f, const mpz_class& k,
                                     const std::vector<i64>& Bs,
                                     const Budget& budget, unsigned threads) {
    if (Bs.size() < 3) throw invariant_error("exponent_scan: need >= 3 box sizes");
    for (size_t i = 1; i < Bs.size(); ++i)
        if (Bs[i] <= Bs[i - 1])
            throw invariant_error("exponent_scan: box sizes must increase strictly");
    std::vector<ScanPoint> out;
    for (i64 B : Bs) {
        EnergyInstance inst{f, k, B};
        CountResult r = energy_mitm(inst, budget, threads);
        out.push_back({B, r.count, r.millis});
    }
    return out;
}

} // namespace aet

#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "aet/congruence.hpp"
#include "aet/energy.hpp"
#include "aet/ffield.hpp"
#include "aet/mpoly.hpp"

using namespace aet;

namespace {

// oracle: direct residue scan
mpz_class naive_count(const Poly1& Q, i64 p, int l) {
    i64 mod = 1;
    for (int i = 0; i < l; ++i) mod *= p;
    mpz_class cnt = 0;
    for (i64 x = 0; x < mod; ++x)
        if (eval_mod(Q, x, mod) == 0) ++cnt;
    return cnt;
}

Poly1 rand_poly(std::mt19937_64& rng, int deg, int bound) {
    std::uniform_int_distribution<int> c(-bound, bound);
    std::vector<mpz_class> cs(deg + 1);
    for (int i = 0; i <= deg; ++i) cs[i] = c(rng);
    return Poly1(cs);
}

} // namespace

TEST_CASE("count_roots examples") {
    CHECK(count_roots_mod_prime_power({parse_poly1("x^2", "x"), 3, 2}) == 3);
    CHECK(count_roots_mod_prime_power({parse_poly1("x - 1", "x"), 5, 4}) == 1);
    CHECK(count_roots_mod_prime_power({parse_poly1("x^2 + 1", "x"), 5, 1}) == 2);
    CHECK(count_roots_mod_prime_power({parse_poly1("x^2 + 1", "x"), 3, 1}) == 0);
    CHECK(count_roots_mod_prime_power({parse_poly1("x^2", "x"), 7, 1}) == 1);
}

TEST_CASE("hensel tree equals naive enumeration (200 random polynomials)") {
    std::mt19937_64 rng(60601);
    const i64 primes[] = {2, 3, 5, 7, 11, 13};
    int done = 0;
    while (done < 200) {
        Poly1 Q = rand_poly(rng, 1 + (int)(rng() % 5), 30);
        if (Q.is_zero()) continue;
        i64 p = primes[rng() % 6];
        int l = 1 + (int)(rng() % 5);
        i64 mod = 1;
        for (int i = 0; i < l; ++i) mod *= p;
        if (mod > 100000) continue;
        CHECK(count_roots_mod_prime_power({Q, p, l}) == naive_count(Q, p, l));
        ++done;
    }
}

TEST_CASE("root counts are multiplicative across coprime moduli (CRT)") {
    std::mt19937_64 rng(11);
    int done = 0;
    while (done < 25) {
        Poly1 Q = rand_poly(rng, 2 + (int)(rng() % 3), 20);
        if (Q.is_zero()) continue;
        int a = 1 + (int)(rng() % 2), b = 1 + (int)(rng() % 2);
        i64 pa = 1, qb = 1;
        for (int i = 0; i < a; ++i) pa *= 3;
        for (int i = 0; i < b; ++i) qb *= 5;
        i64 m = pa * qb;
        mpz_class combined = 0;
        for (i64 x = 0; x < m; ++x)
            if (eval_mod(Q, x, m) == 0) ++combined;
        mpz_class prod = count_roots_mod_prime_power({Q, 3, a}) *
                         count_roots_mod_prime_power({Q, 5, b});
        CHECK(combined == prod);
        ++done;
    }
}

TEST_CASE("p-adic bound: count / p^{l - l/d + v_p(a_d)/d} stays bounded") {
    // Q = x^d and Q = p^m x^d, l <= 12.
    double worst = 0;
    for (i64 p : {2, 3}) {
        for (int d : {3, 4}) {
            for (int m : {0, 2}) {
                mpz_class lead = 1;
                for (int i = 0; i < m; ++i) lead *= p;
                Poly1 Q = Poly1::monomial(lead, d);
                for (int l = 1; l <= 12; ++l) {
                    mpz_class cnt = count_roots_mod_prime_power({Q, p, l});
                    double expo = l - (double)l / d + (double)m / d;
                    double ratio = cnt.get_d() / std::pow((double)p, expo);
                    worst = std::max(worst, ratio);
                }
            }
        }
    }
    CHECK(worst <= 1.0 + 1e-9);   // measured constant for the monomial family
    MESSAGE("p-adic ratio constant (monomial family): ", worst);
}

TEST_CASE("linear congruence counts") {
    CHECK(count_linear_congruence(1, 0, 3, 4, 2) == 9);
    CHECK(count_linear_congruence(7, 5, 3, 4, 0) == 81);
    CHECK(count_linear_congruence(1, 0, 3, 4, 5) == 1);
    CHECK(count_linear_congruence(1, 3, 3, 1, 3) == 0);  // x = -3 mod 27 not below 3
    CHECK_THROWS_AS(count_linear_congruence(3, 1, 3, 2, 1), invariant_error);
    // against direct scans
    for (i64 p : {2, 5}) {
        for (int l = 1; l <= 3; ++l) {
            for (int m = 0; m <= 4; ++m) {
                mpz_class A = 7, Bc = 3;
                i64 pl = 1;
                for (int i = 0; i < l; ++i) pl *= p;
                mpz_class pm = 1;
                for (int i = 0; i < m; ++i) pm *= p;
                mpz_class expect = 0;
                for (i64 x = 0; x < pl; ++x)
                    if ((A * (long)x + Bc) % pm == 0) ++expect;
                CHECK(count_linear_congruence(A, Bc, p, l, m) == expect);
            }
        }
    }
}

TEST_CASE("delta_f: leading-form case and direct evaluation") {
    MPoly f = parse_poly("x^4 - y^4", {"x", "y"});
    // (M,N)=(0,1): f_d(1,0) = 1 (coefficient of x^4)
    DeltaCertificate c = delta_f(f, 1, 0, 1);
    CHECK(c.kind == DeltaCase::LeadingForm);
    CHECK(c.value == 1);
    // (M,N)=(2,1): f_d(1,-2) = 1 - 16 = -15
    c = delta_f(f, 1, 2, 1);
    CHECK(c.kind == DeltaCase::LeadingForm);
    CHECK(c.value == -15);
}

TEST_CASE("delta_f: E0-minus-k branch on the x^3 energy curve") {
    // f = x^3 - y^3, f_d(N,-M) = N^3 + M^3 = 0 at (M,N) = (1,-1)
    MPoly f = parse_poly("x^3 - y^3", {"x", "y"});
    for (long k : {1L, 2L, -7L}) {
        DeltaCertificate c = delta_f(f, k, 1, -1);
        CHECK(c.kind == DeltaCase::E0MinusK);
        CHECK(c.value != 0);
        // E_j all vanish for the pure monomial; value = Dy * (A0 - k B0) = -k Dy B0
        CHECK(mpz_divisible_p(c.value.get_mpz_t(), mpz_class(k).get_mpz_t()));
    }
}

TEST_CASE("delta_f: swapped orientation when N = 0") {
    MPoly f = parse_poly("x^4 - y^4", {"x", "y"});
    DeltaCertificate c = delta_f(f, 3, 1, 0);
    CHECK(c.swapped);
    CHECK(c.value != 0);
    CHECK_THROWS_AS(delta_f(f, 1, 0, 0), invariant_error);
}

TEST_CASE("delta_f: size bound over random inputs, one measured constant") {
    std::mt19937_64 rng(314);
    std::uniform_int_distribution<int> mn(-12, 12), kk(-40, 40);
    MPoly f = parse_poly("x^4 - y^4 + x^2*y - 3*x", {"x", "y"});
    int d = 4;
    double measured = 0;
    int done = 0;
    while (done < 500) {
        long M = mn(rng), N = mn(rng), k = kk(rng);
        if ((M == 0 && N == 0) || k == 0) continue;
        DeltaCertificate c = delta_f(f, k, M, N);
        CHECK(c.value != 0);
        mpz_class mx = std::max(std::abs(M), std::abs(N));
        mpz_class cap;
        mpz_pow_ui(cap.get_mpz_t(), mx.get_mpz_t(), d * d);
        cap *= std::abs(k);
        measured = std::max(measured, mpz_class(abs(c.value)).get_d() / cap.get_d());
        ++done;
    }
    MESSAGE("delta size constant: ", measured);
    CHECK(measured < 1e6);   // recorded; finite by the certificate's size bound
}

TEST_CASE("delta_f soundness: mod-p line implies p | delta (small exhaustive)") {
    // curve f = k over F_p contains the line Mx+Ny=tau iff substituting
    // y = (tau - Mx)/N (or the mirrored form) gives the zero polynomial.
    MPoly f = parse_poly("x^4 - y^4", {"x", "y"});
    mpz_class k = 1;
    int d = 4;
    for (i64 p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (p <= d) continue;   // small primes handled conservatively
        for (long M = -5; M <= 5; ++M)
            for (long N = -5; N <= 5; ++N) {
                if (M == 0 && N == 0) continue;
                if ((M % p == 0) && (N % p == 0)) continue;
                DeltaCertificate cert = delta_f(f, k, M, N);
                bool divides = mpz_divisible_ui_p(cert.value.get_mpz_t(), (unsigned long)p);
                if (divides) continue;   // nothing to verify
                // exhaustive line search over tau in F_p
                for (i64 tau = 0; tau < p; ++tau) {
                    bool is_line = false;
                    if (N % p != 0) {
                        // poly in x: f(x, (tau - Mx) * N^{-1}) - k == 0 in F_p[x]
                        i64 Ninv = invmod_i64(N, p);
                        // expand via substitution with Poly1 coefficients mod p
                        Poly1 X({0, 1});
                        Poly1 Y({mod_reduce(mpz_class(tau), p), mod_reduce(mpz_class(-M), p)});
                        Y = mpz_class(Ninv) * Y;
                        Poly1 expanded = substitute1(f, {X, Y}) - Poly1::constant(k);
                        is_line = true;
                        for (const auto& cc : expanded.coeff)
                            if (mod_reduce(cc, p) != 0) { is_line = false; break; }
                    } else {
                        i64 Minv = invmod_i64(M, p);
                        Poly1 X({mod_reduce(mpz_class((long)tau), p), 0});
                        X = mpz_class(Minv) * X;
                        X.trim();
                        if (X.is_zero()) X = Poly1({0});
                        Poly1 Y({0, 1});
                        Poly1 expanded = substitute1(f, {Poly1({mod_reduce(mpz_class(Minv) * tau, p)}), Y}) -
                                         Poly1::constant(k);
                        is_line = true;
                        for (const auto& cc : expanded.coeff)
                            if (mod_reduce(cc, p) != 0) { is_line = false; break; }
                    }
                    CHECK_FALSE(is_line);
                }
            }
    }
}

TEST_CASE("phi_partial_sum: H=1 gives the single term") {
    auto phi1 = [](i64) { return 1.0; };
    PhiPartialSum s = phi_partial_sum(phi1, 5, 3, 1, 0.1);
    CHECK(s.value == doctest::Approx(2.0));   // h = +1 and h = -1
    CHECK(s.terms == 2);
}

namespace {

// multiplicative |Phi| evaluator with per-prime-power residue caches; the
// factorization identity it relies on is established by the finite-field
// suite
struct PhiAbsFast {
    const GeneralInstance& inst;
    mpz_class scale;
    std::map<i64, std::vector<std::pair<int, int>>> sets;   // q -> members mod q

    explicit PhiAbsFast(const GeneralInstance& gi) : inst(gi) {
        mpz_class s = 1;
        for (int i = 1; i < gi.degree(); ++i) s *= 2 * gi.a * gi.b;
        scale = s;
    }

    const std::vector<std::pair<int, int>>& members(i64 q) {
        auto it = sets.find(q);
        if (it != sets.end()) return it->second;
        std::vector<std::pair<int, int>> mem;
        i64 sc = mod_reduce(scale, q);
        i64 target = mod_reduce(scale * inst.k, q);
        std::vector<MPoly> cols = collect(inst.f, 1);
        std::vector<Poly1> colp;
        for (auto& c : cols) colp.push_back(to_poly1(c, 0));
        for (i64 x = 0; x < q; ++x) {
            std::vector<i64> cx(colp.size());
            for (size_t i = 0; i < colp.size(); ++i) cx[i] = eval_mod(colp[i], x, q);
            for (i64 y = 0; y < q; ++y) {
                i64 fv = 0;
                for (size_t i = colp.size(); i-- > 0;) fv = (fv * y + cx[i]) % q;
                if (mod_reduce(sc * fv - target, q) == 0)
                    mem.push_back({(int)x, (int)y});
            }
        }
        return sets.emplace(q, std::move(mem)).first->second;
    }

    double phi_abs_prime_power(i64 q, i64 M, i64 N) {
        const auto& mem = members(q);
        double re = 0, im = 0;
        i64 Mr = mod_reduce(mpz_class((long)M), q), Nr = mod_reduce(mpz_class((long)N), q);
        for (auto [x, y] : mem) {
            double a = 2.0 * 3.14159265358979323846 *
                       (double)((Mr * x + Nr * y) % q) / (double)q;
            re += std::cos(a);
            im += std::sin(a);
        }
        return std::hypot(re, im);
    }

    double abs_at(i64 h, i64 M, i64 N) {
        double prod = 1.0;
        i64 rest = h;
        for (i64 p = 2; p * p <= rest; ++p) {
            if (rest % p) continue;
            i64 q = 1;
            while (rest % p == 0) { rest /= p; q *= p; }
            i64 cof = h / q;
            i64 inv = invmod_i64(cof % q == 0 ? 1 : cof, q);
            prod *= phi_abs_prime_power(q, inv * (M % q), inv * (N % q));
        }
        if (rest > 1) {
            i64 q = rest, cof = h / q;
            i64 inv = invmod_i64(cof % q, q);
            prod *= phi_abs_prime_power(q, inv * (M % q), inv * (N % q));
        }
        return prod;
    }
};

} // namespace

TEST_CASE("phi partial sums grow slowly in the cutoff") {
    GeneralInstance inst = energy_to_general(parse_poly1("x^4", "x"), 1, 10);
    PhiAbsFast fast(inst);
    mpz_class delta = delta_f(inst.f, inst.k, 3, 1).value;
    const double eps = 0.2;
    auto phi_abs = [&](i64 h) { return fast.abs_at(h, 3, 1); };
    PhiPartialSum s200 = phi_partial_sum(phi_abs, delta, 4, 200, eps);
    PhiPartialSum s2000 = phi_partial_sum(phi_abs, delta, 4, 2000, eps);
    CHECK(s2000.value >= s200.value);   // monotone in H
    CHECK(s2000.value / s200.value <= std::pow(10.0, 3 * eps));
    MESSAGE("phi partial sums: H=200 -> ", s200.value, ", H=2000 -> ", s2000.value,
            ", comparison ", s2000.comparison);
}

TEST_CASE("phi at prime powers: higher-power bound") {
    // Phi(p^l; 0,0) <= C p^{2l-2} for 2 <= l <= d, C measured over p <= 13
    GeneralInstance inst = energy_to_general(parse_poly1("x^4", "x"), 1, 10);
    const int d = 4;
    mpz_class scale = 8;   // (2ab)^{d-1}
    double C = 0;
    for (i64 p : {5, 7, 11, 13}) {
        for (int l = 2; l <= d; ++l) {
            i64 mod = 1;
            for (int i = 0; i < l; ++i) mod *= p;
            if (mod > 30000) continue;
            // count pairs via per-x root counting in y
            mpz_class count = 0;
            std::vector<MPoly> cols = collect(inst.f, 1);
            for (i64 x = 0; x < mod; ++x) {
                std::vector<mpz_class> cy(cols.size());
                for (size_t i = 0; i < cols.size(); ++i) {
                    Poly1 ci = to_poly1(cols[i], 0);
                    cy[i] = scale * eval(ci, mpz_class((long)x));
                }
                cy[0] -= scale * inst.k;
                Poly1 slice(cy, "y");
                if (slice.is_zero()) {
                    count += mod;
                    continue;
                }
                count += count_roots_mod_prime_power({slice, p, l});
            }
            C = std::max(C, count.get_d() / std::pow((double)p, 2 * l - 2));
        }
    }
    MESSAGE("higher-power constant: ", C);
    CHECK(C <= 8.0);
}

TEST_CASE("phi at primes: square-root cancellation against the certificate") {
    GeneralInstance inst = energy_to_general(parse_poly1("x^4", "x"), 1, 10);
    double C = 0;
    for (i64 p : {11, 13, 31, 61, 101}) {
        for (auto [M, N] : std::vector<std::pair<i64, i64>>{{1, 0}, {3, 1}, {5, 7}, {2, 9}}) {
            ExpSumValue v = phi_sum(inst, p, M, N);
            mpz_class delta = delta_f(inst.f, inst.k, M, N).value;
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), delta.get_mpz_t(), mpz_class((long)p).get_mpz_t());
            double bound = std::sqrt((double)p * g.get_d());
            C = std::max(C, std::hypot(v.re, v.im) / bound);
        }
    }
    MESSAGE("prime-level phi constant: ", C);
    CHECK(C <= 6.0);
}

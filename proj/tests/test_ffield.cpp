#include "doctest.h"

#include <cmath>
#include <complex>

#include "aet/energy.hpp"
#include "aet/ffield.hpp"
#include "aet/mpoly.hpp"

using namespace aet;

namespace {

GeneralInstance quartic_instance(long k = 1) {
    return energy_to_general(parse_poly1("x^4", "x"), k, 10);
}

GeneralInstance cubic_instance(long k = 1) {
    return energy_to_general(parse_poly1("x^3", "x"), k, 10);
}

bool is_projectively_singular_mod_p(const MPoly& form, i64 p) {
    const int n = form.nvars;
    std::vector<MPoly> grads;
    for (int v = 0; v < n; ++v) grads.push_back(derivative(form, v));
    u64 total = 1;
    for (int v = 0; v < n; ++v) total *= (u64)p;
    std::vector<i64> pt(n);
    for (u64 step = 1; step < total; ++step) {   // skip the origin
        u64 s = step;
        for (int v = 0; v < n; ++v) {
            pt[v] = (i64)(s % (u64)p);
            s /= (u64)p;
        }
        if (eval_mod(form, pt, p) != 0) continue;
        bool sing = true;
        for (const auto& g : grads)
            if (eval_mod(g, pt, p) != 0) { sing = false; break; }
        if (sing) return true;
    }
    return false;
}

} // namespace

TEST_CASE("local_count_vp examples") {
    CHECK(local_count_vp(parse_poly1("x^2 + 1", "x"), 5) == 2);
    CHECK(local_count_vp(parse_poly1("x^2 + 1", "x"), 3) == 0);
    CHECK(local_count_vp(parse_poly1("x^2", "x"), 7) == 1);
    CHECK_THROWS_AS(local_count_vp(parse_poly1("7*x + 7", "x"), 7), invariant_error);
    CHECK(local_count_vp(parse_poly1("7*x + 7", "x"), 7, true) == 7);
}

TEST_CASE("local_count_vp: scan path agrees with gcd path") {
    // the gcd path activates above 2^14; exercise it directly on a prime
    // above the threshold and compare against a targeted scan
    i64 p = 16411;   // prime > 2^14
    Poly1 Q = parse_poly1("x^3 - 2*x + 5", "x");
    int via_gcd = local_count_vp(Q, p);
    int via_scan = 0;
    for (i64 x = 0; x < p; ++x)
        if (eval_mod(Q, x, p) == 0) ++via_scan;
    CHECK(via_gcd == via_scan);
}

TEST_CASE("ExtField: modulus is irreducible and arithmetic is consistent") {
    ExtField F(5, 2);
    CHECK(F.size() == 25);
    // Frobenius sanity: x^{p^2} = x for every element
    for (u64 i = 0; i < F.size(); ++i) {
        auto e = F.decode(i);
        auto acc = e;
        for (int rep = 0; rep < 2; ++rep) {
            // acc = acc^5
            auto r = F.from_int(1);
            auto base = acc;
            int ex = 5;
            while (ex) {
                if (ex & 1) r = F.mul(r, base);
                base = F.mul(base, base);
                ex >>= 1;
            }
            acc = r;
        }
        CHECK(F.encode(acc) == i);
    }
}

TEST_CASE("surface construction: structural identities") {
    for (auto inst : {cubic_instance(), quartic_instance()}) {
        const int d = inst.degree();
        for (long hh : {1L, -2L, 3L}) {
            SieveSurface s = build_sieve_surface(inst, hh);
            // K(x,y,z,0) = scale * f_d(x,y)
            MPoly K0 = substitute_value(s.K, 3, 0);
            MPoly expect(s.K.vars);
            for (const auto& [e, c] : homogeneous_part(inst.f, d).terms)
                expect.add_term({e[0], e[1], 0, 0}, s.scale * c);
            CHECK(K0 == expect);
            // detection polynomial leading coefficient = h g_{d-1}(b,a)
            CHECK(s.A.lc() == s.h * s.g_lead);
            // P leading form: g_{d-1}(b,a) h (x^{d-2} + ... + y^{d-2})
            MPoly Ptop = homogeneous_part(substitute_value(s.P, 2, 0), d - 2);
            for (int u = 0; u <= d - 2; ++u)
                CHECK(Ptop.coeff({u, d - 2 - u, 0, 0}) == s.g_lead * s.h);
            // P(x,x,1) = A'(x)
            Poly1 Ap = derivative(s.A);
            MPoly Pd = substitute_value(s.P, 2, 1);
            Poly1 diag = substitute1(Pd, {Poly1({0, 1}), Poly1({0, 1}), Poly1({1})});
            CHECK(diag == Ap);
        }
    }
}

TEST_CASE("surface: d=3 auxiliary curve is linear, d=4 coincidence identity") {
    SieveSurface s3 = build_sieve_surface(cubic_instance(), 2);
    // P = g2(b,a) h (x + y) + c1 w
    CHECK(s3.P.total_degree() == 1);
    CHECK(s3.P.coeff({1, 0, 0, 0}) == s3.g_lead * s3.h);
    CHECK(s3.P.coeff({0, 1, 0, 0}) == s3.g_lead * s3.h);

    SieveSurface s4 = build_sieve_surface(quartic_instance(), 3);
    // P(x,y,1) - P(x,z,1) == (y - z) * (G (x+y+z) + c2), G = g3(b,a) h
    std::vector<std::string> xyz{"x", "y", "z"};
    MPoly Pxy(xyz), Pxz(xyz);
    MPoly Paff = substitute_value(s4.P, 2, 1);   // in (x,y)
    for (const auto& [e, c] : Paff.terms) {
        Pxy.add_term({e[0], e[1], 0, 0}, c);
        Pxz.add_term({e[0], 0, e[1], 0}, c);
    }
    mpz_class G = s4.g_lead * s4.h;
    mpz_class c2 = s4.P.coeff({1, 0, 1, 0});
    MPoly ymz(xyz), lin(xyz);
    ymz.add_term({0, 1, 0, 0}, 1);
    ymz.add_term({0, 0, 1, 0}, -1);
    lin.add_term({1, 0, 0, 0}, G);
    lin.add_term({0, 1, 0, 0}, G);
    lin.add_term({0, 0, 1, 0}, G);
    lin.add_term({0, 0, 0, 0}, c2);
    CHECK(Pxy - Pxz == ymz * lin);
}

TEST_CASE("surface: integral construction for a general instance") {
    std::vector<std::string> XY{"x", "y"};
    GeneralInstance gi;
    gi.f = parse_poly("x^4 - y^4 + x*y", XY);
    gi.g = parse_poly("2*x^3 - x*y^2 + y^3 - x^2 + 5", XY);
    gi.a = 3;
    gi.b = -2;
    gi.k = 7;
    gi.B = 5;
    try {
        SieveSurface s = build_sieve_surface(gi, 5);
        CHECK(s.A.lc() == s.h * s.g_lead);
    } catch (const invariant_error&) {
        // acceptable: the instance may violate a smoothness hypothesis;
        // only exactness of the construction is exercised here
    }
}

TEST_CASE("sigma: orthogonality at t=0") {
    SieveSurface s = build_sieve_surface(quartic_instance(), 1);
    for (i64 p : {5, 11}) {
        ExpSumValue v = sigma_t(s, 0, p, 0, 0);
        REQUIRE(v.exact.has_value());
        CHECK(*v.exact == p * p);
        ExpSumValue z = sigma_t(s, 0, p, 2, 3);
        CHECK(std::abs(z.re) < 1e-9 * p * p);
        CHECK(std::abs(z.im) < 1e-9 * p * p);
    }
}

TEST_CASE("sigma: conjugation symmetry") {
    SieveSurface s = build_sieve_surface(quartic_instance(), 2);
    LocalCounts tab = local_count_table(s, 13);
    for (int t : {1, 2, 3}) {
        ExpSumValue a = sigma_t(tab, t, 3, 5);
        ExpSumValue b = sigma_t(tab, t, -3, -5);
        CHECK(a.re == doctest::Approx(b.re).epsilon(1e-12));
        CHECK(a.im == doctest::Approx(-b.im).epsilon(1e-12));
    }
}

TEST_CASE("sigma: t=1 main term on the smooth quartic surface") {
    SieveSurface s = build_sieve_surface(quartic_instance(), 1);
    i64 p = 101;
    REQUIRE(admissible_prime(s, p));
    LocalCounts tab = local_count_table(s, p);
    ExpSumValue v = sigma_t(tab, 1, 0, 0);
    REQUIRE(v.exact.has_value());
    mpz_class dev = *v.exact - p * p;
    double C = std::abs(dev.get_d()) / p;
    MESSAGE("Sigma_1(101;0,0) deviation constant: ", C);
    CHECK(C <= 12.0);
    // off-diagonal: square-root scale cancellation, measured
    double worst = 0;
    for (auto [M, N] : std::vector<std::pair<i64, i64>>{{1, 0}, {0, 1}, {3, 7}, {50, 99}}) {
        ExpSumValue u = sigma_t(tab, 1, M, N);
        worst = std::max(worst, std::hypot(u.re, u.im) / p);
    }
    MESSAGE("max |Sigma_1(101;M,N)|/p off the diagonal: ", worst);
    CHECK(worst <= 12.0);
}

TEST_CASE("sigma: Parseval reconstruction is exact after rounding") {
    SieveSurface s = build_sieve_surface(quartic_instance(), 1);
    for (i64 p : {11, 31}) {
        LocalCounts tab = local_count_table(s, p);
        auto grid = sigma1_grid(tab);
        double acc = 0;
        for (const auto& z : grid) acc += std::norm(z);
        acc /= (double)(p * p);
        ExpSumValue s2 = sigma_t(tab, 2, 0, 0);
        REQUIRE(s2.exact.has_value());
        CHECK(std::abs(acc - s2.exact->get_d()) <= 1e-6 * p * p);
        CHECK(mpz_class((long)std::llround(acc)) == *s2.exact);
    }
}

TEST_CASE("phi: single class, periodicity, conjugation") {
    GeneralInstance inst = quartic_instance();
    ExpSumValue one = phi_sum(inst, 1, 17, -4);
    CHECK(one.re == doctest::Approx(1.0));
    CHECK(one.im == doctest::Approx(0.0));

    ExpSumValue a = phi_sum(inst, 12, 5, 7);
    ExpSumValue b = phi_sum(inst, 12, 5 + 12, 7 - 24);
    CHECK(a.re == doctest::Approx(b.re).epsilon(1e-12));
    CHECK(a.im == doctest::Approx(b.im).epsilon(1e-12));

    ExpSumValue c = phi_sum(inst, 12, -5, -7);
    CHECK(a.re == doctest::Approx(c.re).epsilon(1e-12));
    CHECK(a.im == doctest::Approx(-c.im).epsilon(1e-12));
}

TEST_CASE("phi: multiplicativity over coprime moduli") {
    GeneralInstance inst = quartic_instance();
    auto mul_ok = [&](i64 j, i64 l, i64 M, i64 N) {
        i64 jb, lb;
        egcd_i64(j, l, jb, lb);   // j*jb + l*lb = 1
        ExpSumValue lhs = phi_sum(inst, j * l, M, N);
        ExpSumValue r1 = phi_sum(inst, j, mod_reduce(mpz_class(lb) * l * M, j),
                                 mod_reduce(mpz_class(lb) * l * N, j));
        ExpSumValue r2 = phi_sum(inst, l, mod_reduce(mpz_class(jb) * j * M, l),
                                 mod_reduce(mpz_class(jb) * j * N, l));
        std::complex<double> prod = r1.value() * r2.value();
        double tol = 1e-6 * (double)(j * l) * (double)(j * l);
        CHECK(std::abs(lhs.value() - prod) <= tol);
    };
    // Phi(jl; M, N) = Phi(j; lbar M, lbar N) Phi(l; jbar M, jbar N),
    // where lbar l = 1 mod j and jbar j = 1 mod l.
    for (auto [j, l] : std::vector<std::pair<i64, i64>>{
             {3, 4}, {5, 8}, {7, 9}, {25, 12}, {49, 50}, {11, 45}})
        for (auto [M, N] : std::vector<std::pair<i64, i64>>{{0, 0}, {1, 2}, {17, 5}})
            mul_ok(j, l, M, N);
}

TEST_CASE("psi: direct equals factored (distinct primes and equal primes)") {
    GeneralInstance inst = quartic_instance();
    for (long hh : {2L, -3L}) {
        SieveSurface s = build_sieve_surface(inst, hh);
        for (auto [p, q] : std::vector<std::pair<i64, i64>>{{5, 7}, {5, 5}, {7, 11}}) {
            PsiContext ctx = make_psi_context(s, p, q);
            double tol = 1e-6 * (double)ctx.modulus * ctx.modulus;
            for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}})
                for (auto [m, n] : std::vector<std::pair<i64, i64>>{{0, 0}, {1, 2}, {p, q}, {35, 0}}) {
                    ExpSumValue d = psi_direct(ctx, i, j, m, n);
                    ExpSumValue f = psi_factored(s, i, j, m, n, p, q);
                    CHECK(std::abs(d.value() - f.value()) <= tol);
                }
        }
    }
}

TEST_CASE("psi: equal primes vanish off the p-divisible frequencies") {
    SieveSurface s = build_sieve_surface(quartic_instance(), 3);
    PsiContext ctx = make_psi_context(s, 5, 5);
    ExpSumValue d = psi_direct(ctx, 1, 1, 1, 0);
    ExpSumValue f = psi_factored(s, 1, 1, 1, 0, 5, 5);
    CHECK(std::abs(f.value()) == 0.0);
    CHECK(std::abs(d.value()) <= 1e-6 * ctx.modulus * ctx.modulus);
}

TEST_CASE("psi: gcd violation rejected; counting identity at (0,0)") {
    SieveSurface s = build_sieve_surface(quartic_instance(), 2);
    CHECK_THROWS_AS(make_psi_context(s, 2, 7), invariant_error);
    for (auto [p, q] : std::vector<std::pair<i64, i64>>{{3, 5}, {5, 7}}) {
        PsiContext ctx = make_psi_context(s, p, q);
        ExpSumValue d = psi_direct(ctx, 0, 0, 0, 0);
        ExpSumValue phi = phi_sum(s.inst, 2, 0, 0);
        REQUIRE(d.exact.has_value());
        REQUIRE(phi.exact.has_value());
        CHECK(*d.exact == mpz_class(p) * p * q * q * *phi.exact);
    }
}

TEST_CASE("moment statistic: identity map has zero second moment") {
    ExtField F(7, 1);
    MPoly id = parse_poly("x", {"x"});
    MomentStatistic m = moment_statistic(id, {}, F, 1.0);
    CHECK(m.points == 7);
    CHECK(m.second_moment == doctest::Approx(0.0));
}

TEST_CASE("moment statistic: elliptic curve point counts satisfy the Hasse window") {
    std::vector<std::string> XY{"x", "y"};
    MPoly curve = parse_poly("y^2 - x^3 - x - 1", XY);
    MPoly proj = parse_poly("x", XY);
    for (i64 p : {5, 7, 11, 13}) {
        ExtField F(p, 1);
        MomentStatistic m = moment_statistic(proj, {curve}, F, 0.0);
        long affine = (long)m.points;
        long with_inf = affine + 1;
        CHECK(std::abs((double)(with_inf - (long)p - 1)) <= 2.0 * std::sqrt((double)p));
        if (p == 5) CHECK(affine == 8);
    }
}

TEST_CASE("moment statistic over an extension field") {
    // N_2(tau) for F(x) = x over F_{5^2} with no constraints is identically 1
    ExtField F(5, 2);
    MPoly id = parse_poly("x", {"x"});
    MomentStatistic m = moment_statistic(id, {}, F, 1.0);
    CHECK(m.points == 25);
    CHECK(m.second_moment == doctest::Approx(0.0));
}

TEST_CASE("smooth surface point counts track p^3 on the affine cone") {
    SieveSurface s = build_sieve_surface(quartic_instance(), 1);
    double worst = 0;
    for (i64 p : {5, 7, 11, 13}) {
        if (!admissible_prime(s, p)) continue;
        u64 proj = projective_point_count(s.K, p);
        double cone = (double)proj * (p - 1) + 1;
        double dev = std::abs(cone - std::pow((double)p, 3)) / ((double)p * p);
        worst = std::max(worst, dev);
    }
    MESSAGE("Deligne deviation ratio (affine cone vs p^3): ", worst);
    CHECK(worst < 8.0);
}

TEST_CASE("admissible primes avoid visible singular reductions") {
    GeneralInstance inst = quartic_instance();
    for (long hh : {1L, 2L, 5L}) {
        SieveSurface s = build_sieve_surface(inst, hh);
        for (i64 p : admissible_primes(s, 13)) {
            CHECK_FALSE(is_projectively_singular_mod_p(s.K, p));
            CHECK_FALSE(is_projectively_singular_mod_p(s.P, p));
        }
    }
}

TEST_CASE("sigma combinatorics: multiplicities are stable integers") {
    // d = 3: values v <= 2, so sigma_t = (1 - c_t) Sigma_1 + c_t Sigma_2
    // exactly, with c_t = 2^{t-1} - 1.
    SieveSurface s3 = build_sieve_surface(cubic_instance(), 1);
    for (int t : {3, 4}) {
        long expect_c = (1L << (t - 1)) - 1;
        SigmaCombinatorics c5 = sigma_combinatorics(s3, 5, t);
        SigmaCombinatorics c7 = sigma_combinatorics(s3, 7, t);
        CHECK(c5.multiplicity[2] == expect_c);
        CHECK(c7.multiplicity[2] == expect_c);
        CHECK(c5.tuples_sigma[3] == 0);   // no three distinct roots when d=3
        // the decomposition itself, exactly, at (0,0)
        LocalCounts tab = local_count_table(s3, 7);
        ExpSumValue s1 = sigma_t(tab, 1, 0, 0), s2 = sigma_t(tab, 2, 0, 0),
                    st = sigma_t(tab, t, 0, 0);
        mpz_class combo = (1 - expect_c) * *s1.exact + expect_c * *s2.exact;
        CHECK(*st.exact == combo);
        MESSAGE("derived c_", t, " = ", c5.multiplicity[2]);
    }
    // d = 4: the three-distinct-roots class appears with its own multiplicity
    SieveSurface s4 = build_sieve_surface(quartic_instance(), 1);
    for (int t : {3, 4}) {
        SigmaCombinatorics c5 = sigma_combinatorics(s4, 5, t);
        SigmaCombinatorics c7 = sigma_combinatorics(s4, 7, t);
        CHECK(c5.multiplicity[2] == (1L << (t - 1)) - 1);
        if (c5.bases_sigma[3] != 0 && c7.bases_sigma[3] != 0)
            CHECK(c5.multiplicity[3] == c7.multiplicity[3]);
        MESSAGE("derived d_", t, " (three-value class) = ", c5.multiplicity[3]);
    }
}

#include "aet/geometry.hpp"

#include <algorithm>
#include <map>

namespace aet {

namespace {

mpz_class mpz_pow_int(const mpz_class& b, unsigned e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpz_class binom(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// coefficients of f(t, alpha t + beta) as elements of the quotient ring
std::vector<AlgElem> line_substitution(const MPoly& f, const AlgElem& alpha,
                                       const AlgElem& beta) {
    const RingPtr& R = alpha.ring;
    const int d = f.total_degree();
    std::vector<AlgElem> out((size_t)d + 1, AlgElem::from_rational(R, 0));
    int dmax = std::max(0, f.degree_in(1));
    std::vector<std::vector<AlgElem>> pw;   // pw[j][m] = C(j,m) alpha^m beta^{j-m}
    std::vector<AlgElem> apow((size_t)dmax + 1, AlgElem::from_rational(R, 1));
    std::vector<AlgElem> bpow((size_t)dmax + 1, AlgElem::from_rational(R, 1));
    for (int i = 1; i <= dmax; ++i) {
        apow[i] = apow[i - 1] * alpha;
        bpow[i] = bpow[i - 1] * beta;
    }
    for (const auto& [e, c] : f.terms) {
        int i = e[0], j = e[1];
        AlgElem cc = AlgElem::from_rational(R, mpq_class(c));
        for (int m = 0; m <= j; ++m) {
            AlgElem term = cc * AlgElem::from_rational(R, mpq_class(binom(j, m))) *
                           apow[m] * bpow[j - m];
            out[i + m] = out[i + m] + term;
        }
    }
    return out;
}

// gcd of the modulus with every constraint representative
RatPoly1 common_vanishing_factor(const RingPtr& R, const std::vector<AlgElem>& constraints) {
    RatPoly1 g = R->modulus;
    for (const auto& c : constraints) {
        if (c.rep.is_zero()) continue;
        g = rat_gcd(g, c.rep);
        if (g.degree() == 0) break;
    }
    return g;
}

std::vector<mpz_class> divisors_of(const mpz_class& n_in) {
    mpz_class n = abs(n_in);
    if (n == 0) throw invariant_error("divisors of zero");
    if (n > mpz_class("1000000000000000"))
        throw invariant_error("divisor enumeration: constant term too large");
    std::vector<std::pair<mpz_class, int>> fac;
    mpz_class m = n;
    for (mpz_class p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) { m /= p; ++e; }
            fac.push_back({p, e});
        }
    }
    if (m > 1) fac.push_back({m, 1});
    std::vector<mpz_class> divs{1};
    for (auto& [p, e] : fac) {
        size_t sz = divs.size();
        mpz_class pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t u = 0; u < sz; ++u) divs.push_back(divs[u] * pk);
        }
    }
    return divs;
}

std::vector<mpq_class> rational_roots(const Poly1& f_in) {
    Poly1 f = primitive_part(f_in);
    std::vector<mpq_class> out;
    if (f.is_zero()) throw invariant_error("rational_roots of zero polynomial");
    // strip powers of the variable
    size_t shift = 0;
    while (shift < f.coeff.size() && f.coeff[shift] == 0) ++shift;
    if (shift > 0) {
        out.push_back(0);
        f.coeff.erase(f.coeff.begin(), f.coeff.begin() + shift);
    }
    if (f.degree() < 1) return out;
    for (const auto& num : divisors_of(f.coeff[0]))
        for (const auto& den : divisors_of(f.lc())) {
            for (int sign : {1, -1}) {
                mpq_class cand(sign * num, den);
                cand.canonicalize();
                if (eval(f, cand) == 0 &&
                    std::find(out.begin(), out.end(), cand) == out.end())
                    out.push_back(cand);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

LevelLineReport classify_level_lines(const MPoly& f) {
    if (f.nvars != 2) throw invariant_error("classify_level_lines: bivariate input expected");
    const int d = f.total_degree();
    MPoly fd = homogeneous_part(f, d);
    if (discriminant_form(fd) == 0)
        throw invariant_error("classify_level_lines: f_d fails the squarefree precondition");
    MPoly fdm1 = homogeneous_part(f, d - 1);
    MPoly fdy = derivative(fd, 1);

    LevelLineReport rep;

    // slope candidates: roots of f_d(1, y)
    std::vector<mpq_class> mcoef((size_t)d + 1, mpq_class(0));
    for (const auto& [e, c] : fd.terms) mcoef[e[1]] = mpq_class(c);
    RatPoly1 m(mcoef, "y");
    if (m.degree() >= 1) {
        std::vector<RingPtr> work{std::make_shared<const NumberRing>(m)};
        while (!work.empty()) {
            RingPtr R = work.back();
            work.pop_back();
            AlgElem alpha = AlgElem::generator(R);
            AlgElem one = AlgElem::from_rational(R, 1);
            AlgElem zero = AlgElem::from_rational(R, 0);
            try {
                AlgElem dy = alg_eval(fdy, one, alpha);
                AlgElem beta = -(alg_eval(fdm1, one, alpha) * dy.inverse());
                AlgElem level = alg_eval(f, zero, beta);
                std::vector<AlgElem> cons = line_substitution(f, alpha, beta);
                std::vector<AlgElem> must_vanish(cons.begin() + 1, cons.end());
                RatPoly1 g = common_vanishing_factor(R, must_vanish);
                if (g.degree() >= 1) {
                    RingPtr Rg = std::make_shared<const NumberRing>(g);
                    rep.families.push_back({Rg, project(alpha, Rg), project(beta, Rg),
                                            project(level, Rg), true});
                }
                RatPoly1 cof = divexact(R->modulus, g.degree() >= 1 ? g
                                        : RatPoly1::constant(1, "y"));
                if (cof.degree() >= 1) {
                    RingPtr Rc = std::make_shared<const NumberRing>(cof);
                    rep.families.push_back({Rc, project(alpha, Rc), project(beta, Rc),
                                            project(level, Rc), false});
                }
            } catch (const split_error& e) {
                RatPoly1 other = divexact(R->modulus, e.factor);
                work.push_back(std::make_shared<const NumberRing>(e.factor));
                if (other.degree() >= 1)
                    work.push_back(std::make_shared<const NumberRing>(other));
            }
        }
    }

    // vertical candidate, only when f_d(0,1) = 0
    std::vector<mpz_class> zero_one{0, 1};
    if (eval(fd, zero_one) == 0) {
        MPoly fdx = derivative(fd, 0);
        mpz_class dx = eval(fdx, zero_one);
        if (dx == 0)
            throw invariant_error("classify_level_lines: x^2 divides f_d");
        mpz_class f1 = eval(fdm1, zero_one);
        rep.vertical.exists = true;
        rep.vertical.gamma = mpq_class(-f1, dx);
        rep.vertical.gamma.canonicalize();
        std::vector<mpq_class> pt{rep.vertical.gamma, mpq_class(0)};
        rep.vertical.level = eval(f, pt);
        // verify f(gamma, t) is constant: expand term by term
        bool genuine = true;
        std::map<int, mpq_class> acc;
        for (const auto& [e, c] : f.terms) {
            mpq_class g = c;
            for (int u = 0; u < e[0]; ++u) g *= rep.vertical.gamma;
            acc[e[1]] += g;
        }
        for (const auto& [j, c] : acc)
            if (j >= 1 && c != 0) genuine = false;
        rep.vertical.genuine = genuine;
    }
    return rep;
}

CurveLineSearch rational_line_check(const Poly1& p, const mpz_class& k) {
    const int d = p.degree();
    if (d < 1) throw invariant_error("rational_line_check: deg >= 1 required");
    CurveLineSearch out;
    out.candidates_checked = d;
    // ring Q[y]/(y^d - 1); beta = a_{d-1}(alpha - 1)/(d a_d)
    std::vector<mpq_class> mc((size_t)d + 1, mpq_class(0));
    mc[0] = -1;
    mc[d] = 1;
    RingPtr R = std::make_shared<const NumberRing>(RatPoly1(mc, "y"));
    AlgElem alpha = AlgElem::generator(R);
    mpq_class scale(p.at(d - 1), mpz_class(d) * p.lc());
    scale.canonicalize();
    AlgElem beta = AlgElem::from_rational(R, scale) *
                   (alpha - AlgElem::from_rational(R, 1));
    // constraints: all coefficients of p(t) - p(alpha t + beta) - k
    MPoly f2({std::string("x"), std::string("y")});
    for (int i = 0; i <= d; ++i) {
        if (p.coeff[i] == 0) continue;
        f2.add_term({i, 0, 0, 0}, p.coeff[i]);
        f2.add_term({0, i, 0, 0}, -p.coeff[i]);
    }
    std::vector<AlgElem> cons = line_substitution(f2, alpha, beta);
    cons[0] = cons[0] - AlgElem::from_rational(R, mpq_class(k));
    RatPoly1 g = common_vanishing_factor(R, cons);
    if (g.degree() >= 1) {
        out.any_line = true;
        RingPtr Rg = std::make_shared<const NumberRing>(g);
        out.lines.push_back({Rg, project(alpha, Rg), project(beta, Rg),
                             AlgElem::from_rational(Rg, mpq_class(k)), true});
    }
    return out;
}

std::vector<RationalLine> find_rational_lines(const MPoly& f, const mpz_class& k) {
    const int d = f.total_degree();
    MPoly fd = homogeneous_part(f, d);
    if (discriminant_form(fd) == 0)
        throw invariant_error("find_rational_lines: f_d must be squarefree");
    MPoly fdm1 = homogeneous_part(f, d - 1);
    MPoly fdy = derivative(fd, 1);
    std::vector<RationalLine> out;
    // slope candidates with rational alpha
    std::vector<mpz_class> mcoef((size_t)d + 1, 0);
    for (const auto& [e, c] : fd.terms) mcoef[e[1]] = c;
    Poly1 m(mcoef, "y");
    if (m.degree() >= 1) {
        for (const mpq_class& a0 : rational_roots(m)) {
            std::vector<mpq_class> pt{mpq_class(1), a0};
            mpq_class dy = eval(fdy, pt);
            if (dy == 0)
                throw invariant_error("find_rational_lines: singular slope candidate");
            mpq_class b0 = -eval(fdm1, pt) / dy;
            // identity f(t, a0 t + b0) == k
            std::map<int, mpq_class> acc;
            for (const auto& [e, c] : f.terms) {
                // expand (a0 t + b0)^j
                for (int mth = 0; mth <= e[1]; ++mth) {
                    mpq_class term = mpq_class(c) * mpq_class(binom(e[1], mth));
                    for (int u = 0; u < mth; ++u) term *= a0;
                    for (int u = 0; u < e[1] - mth; ++u) term *= b0;
                    acc[e[0] + mth] += term;
                }
            }
            bool ok = (acc[0] == mpq_class(k));
            for (const auto& [deg, c] : acc)
                if (deg >= 1 && c != 0) ok = false;
            if (ok) {
                RationalLine l;
                l.alpha = a0;
                l.beta = b0;
                out.push_back(l);
            }
        }
    }
    // vertical
    std::vector<mpz_class> zero_one{0, 1};
    if (eval(fd, zero_one) == 0) {
        MPoly fdx = derivative(fd, 0);
        mpz_class dx = eval(fdx, zero_one);
        if (dx == 0) throw invariant_error("find_rational_lines: x^2 divides f_d");
        mpq_class g0(-eval(fdm1, zero_one), dx);
        g0.canonicalize();
        std::map<int, mpq_class> acc;
        for (const auto& [e, c] : f.terms) {
            mpq_class t = c;
            for (int u = 0; u < e[0]; ++u) t *= g0;
            acc[e[1]] += t;
        }
        bool ok = (acc[0] == mpq_class(k));
        for (const auto& [deg, c] : acc)
            if (deg >= 1 && c != 0) ok = false;
        if (ok) {
            RationalLine l;
            l.vertical = true;
            l.gamma = g0;
            out.push_back(l);
        }
    }
    return out;
}

HypothesisReport check_hypotheses(const GeneralInstance& inst) {
    HypothesisReport rep;
    const int d = inst.degree();
    MPoly fd = homogeneous_part(inst.f, d);
    rep.fd_squarefree = discriminant_form(fd) != 0;
    // (a x - b y) g_{d-1}
    MPoly lin(inst.f.vars);
    lin.add_term({1, 0, 0, 0}, inst.a);
    lin.add_term({0, 1, 0, 0}, -inst.b);
    MPoly mixed = lin * homogeneous_part(inst.g, d - 1);
    rep.mixed_form_squarefree = discriminant_form(mixed) != 0;
    if (d == 4) {
        // cleared gradient form a^3 b^3 [ (1/a) gx(x/a, y/b) + (1/b) gy(x/a, y/b) ]
        MPoly g3 = homogeneous_part(inst.g, 3);
        MPoly gx = derivative(g3, 0), gy = derivative(g3, 1);
        MPoly grad(inst.f.vars);
        for (const auto& [e, c] : gx.terms)
            grad.add_term(e, c * mpz_pow_int(inst.a, 2 - e[0]) * mpz_pow_int(inst.b, 3 - e[1]));
        for (const auto& [e, c] : gy.terms)
            grad.add_term(e, c * mpz_pow_int(inst.a, 3 - e[0]) * mpz_pow_int(inst.b, 2 - e[1]));
        rep.gradient_form = grad;
        rep.gradient_squarefree = !grad.is_zero() && discriminant_form(grad) != 0;
    }
    rep.no_rational_line =
        rep.fd_squarefree && find_rational_lines(inst.f, inst.k).empty();
    return rep;
}

namespace {

// G_n(t) = (a t - b n) g(t, n) as a polynomial in t for concrete n
Poly1 slice_x_part(const GeneralInstance& inst, const mpz_class& n) {
    MPoly gt = substitute_value(inst.g, 1, n);   // g(t, n) in variable x
    Poly1 g1 = to_poly1(gt, 0);
    g1.var = "t";
    Poly1 lin({-inst.b * n, inst.a}, "t");
    return lin * g1;
}

// count integers t in [1,B] with alpha t + beta an integer in [1,B]
mpz_class count_line_points(const mpq_class& alpha, const mpq_class& beta, i64 B) {
    mpz_class cnt = 0;
    for (i64 t = 1; t <= B; ++t) {
        mpq_class y = alpha * t + beta;
        if (y.get_den() != 1) continue;
        if (y.get_num() >= 1 && y.get_num() <= B) ++cnt;
    }
    return cnt;
}

} // namespace

GammaLineReport gamma_n_line_report(const GeneralInstance& inst, i64 n) {
    inst.validate();
    const i64 B = inst.B;
    MPoly gslice = substitute_value(inst.g, 1, mpz_class((long)n));
    if (gslice.is_zero())
        throw invariant_error("gamma_n_line_report: g(., n) vanishes identically");
    GammaLineReport out;
    out.n = n;
    Poly1 Gn = slice_x_part(inst, mpz_class((long)n));
    LevelLineReport lines = classify_level_lines(inst.f);

    for (const auto& fam : lines.families) {
        if (!fam.genuine) continue;
        Poly1 mz = clear_denominators(fam.ring->modulus);
        std::vector<mpq_class> rroots = rational_roots(mz);
        for (const mpq_class& a0 : rroots) {
            mpq_class b0 = eval(fam.beta.rep, a0);
            mpq_class l0 = eval(fam.level.rep, a0);
            if (l0 == mpq_class(inst.k)) {
                out.entries.push_back({3, "slope line inside the k-level (irrational offset)", 0});
                continue;
            }
            // (a x3 - b n) g(x3, n) = l0 - k, integer solutions in [1,B]
            mpq_class rhs = l0 - mpq_class(inst.k);
            Poly1 eqn = mpz_class(rhs.get_den()) * Gn -
                        Poly1::constant(rhs.get_num(), "t");
            mpz_class pts = 0;
            std::vector<mpz_class> roots;
            if (eqn.degree() >= 1)
                roots = integer_roots_in_range(eqn, 1, B);
            else if (eqn.is_zero())
                throw invariant_error("gamma_n_line_report: degenerate slice equation");
            mpz_class per_line = count_line_points(a0, b0, B);
            pts = mpz_class((long)roots.size()) * per_line;
            out.entries.push_back(
                {1, "x2 = " + a0.get_str() + "*x1 + " + b0.get_str(), pts});
            out.points_cases12 += pts;
        }
        if (fam.ring->modulus.degree() > (int)rroots.size())
            out.entries.push_back({3, "slope lines with irrational coefficients", 0});
    }
    if (lines.vertical.exists && lines.vertical.genuine) {
        mpq_class l0 = lines.vertical.level;
        if (l0 == mpq_class(inst.k)) {
            out.entries.push_back({3, "vertical line inside the k-level", 0});
        } else {
            mpq_class rhs = l0 - mpq_class(inst.k);
            Poly1 eqn = mpz_class(rhs.get_den()) * Gn -
                        Poly1::constant(rhs.get_num(), "t");
            std::vector<mpz_class> roots;
            if (eqn.degree() >= 1) roots = integer_roots_in_range(eqn, 1, B);
            mpz_class pts = 0;
            const mpq_class& g0 = lines.vertical.gamma;
            if (g0.get_den() == 1 && g0.get_num() >= 1 && g0.get_num() <= B)
                pts = mpz_class((long)roots.size()) * B;
            out.entries.push_back({2, "x1 = " + g0.get_str(), pts});
            out.points_cases12 += pts;
        }
    }
    out.entries.push_back({3, "lines with x3 nonconstant (at most one integer point each)", 0});
    return out;
}

// ---------------------------------------------------------------------------
// Censuses
// ---------------------------------------------------------------------------

namespace {

// A(z, h) = scale h g((z+h)/2a, (z-h)/2b) with h symbolic
MPoly symbolic_x_part(const GeneralInstance& inst) {
    const int d = inst.degree();
    std::vector<std::string> zh{"z", "h"};
    MPoly A(zh);
    for (const auto& [e, c] : inst.g.terms) {
        int i = e[0], jj = e[1];
        mpz_class unit = mpz_pow_int(2, d - 1 - i - jj) * mpz_pow_int(inst.a, d - 1 - i) *
                         mpz_pow_int(inst.b, d - 1 - jj) * c;
        // unit * h * (z+h)^i (z-h)^j
        for (int u = 0; u <= i; ++u)
            for (int w = 0; w <= jj; ++w) {
                mpz_class coef = unit * binom(i, u) * binom(jj, w);
                if ((jj - w) % 2) coef = -coef;
                A.add_term({u + w, 1 + (i - u) + (jj - w), 0, 0}, coef);
            }
    }
    return A;
}

// limit form of A(hz)/h^d: scale g_{d-1}((z+1)/2a, (z-1)/2b)
Poly1 limit_x_form(const GeneralInstance& inst) {
    const int d = inst.degree();
    MPoly gtop = homogeneous_part(inst.g, d - 1);
    std::vector<mpz_class> acc((size_t)d, 0);
    for (const auto& [e, c] : gtop.terms) {
        int i = e[0], jj = e[1];
        mpz_class unit = mpz_pow_int(2, d - 1 - i - jj) * mpz_pow_int(inst.a, d - 1 - i) *
                         mpz_pow_int(inst.b, d - 1 - jj) * c;
        for (int u = 0; u <= i; ++u)
            for (int w = 0; w <= jj; ++w) {
                mpz_class coef = unit * binom(i, u) * binom(jj, w);
                if ((jj - w) % 2) coef = -coef;
                acc[u + w] += coef;
            }
    }
    return Poly1(std::move(acc), "z");
}

// extract the leading coefficient in variable 0, requiring it free of
// variable 1
mpz_class leading_in_param(const MPoly& D, const char* what) {
    int dn = D.degree_in(0);
    mpz_class lead = 0;
    for (const auto& [e, c] : D.terms) {
        if (e[0] != dn) continue;
        if (e[1] != 0)
            throw invariant_error(std::string(what) +
                                  ": leading coefficient depends on the shift");
        lead = c;
    }
    return lead;
}

std::vector<mpz_class> window_roots(const Poly1& f, const mpz_class& lo, const mpz_class& hi,
                                    bool drop_zero) {
    std::vector<mpz_class> roots;
    if (f.degree() >= 1) roots = integer_roots_in_range(f, lo, hi);
    if (drop_zero)
        roots.erase(std::remove(roots.begin(), roots.end(), mpz_class(0)), roots.end());
    return roots;
}

} // namespace

SingularCensus singular_census(const GeneralInstance& inst, CensusFamily fam, i64 B) {
    inst.validate();
    const int d = inst.degree();
    SingularCensus out;
    out.family = fam;
    MPoly fd = homogeneous_part(inst.f, d);
    MPoly gtop = homogeneous_part(inst.g, d - 1);
    mpz_class g_lead = eval(gtop, std::vector<mpz_class>{inst.b, inst.a});
    mpz_class disc_fd = discriminant_form(fd);
    if (disc_fd == 0) throw invariant_error("singular_census: f_d not squarefree");
    out.guard = 6 * inst.a * inst.b * content(fd) * disc_fd;
    if (g_lead != 0) out.guard *= g_lead;

    if (fam == CensusFamily::P) {
        out.parameter = "h";
        Poly1 Lk = limit_x_form(inst);
        if (d == 3) {
            // the auxiliary curve is a line for every h != 0
            out.disc_polynomial = Poly1({1}, "h");
            out.leading_coefficient = 1;
            out.predicted_leading = 1;
            return out;
        }
        MPoly Asym = symbolic_x_part(inst);
        MPoly Ap = derivative(Asym, 0);
        ParamPoly F = ParamPoly::from_mpoly(Ap, 0, 1);
        F.main_var = "z";
        F.param = "h";
        out.disc_polynomial = disc_in_param(F);
        if (out.disc_polynomial.is_zero())
            throw invariant_error("singular_census: identically vanishing discriminant (P)");
        out.leading_coefficient = out.disc_polynomial.lc();
        out.predicted_leading = discriminant(derivative(Lk));
        out.integer_roots = window_roots(out.disc_polynomial, -B, B, true);
        out.guard *= out.leading_coefficient;
        return out;
    }

    CriticalValues cv = critical_value_polynomial(inst.f);
    out.guard *= cv.guard;

    if (fam == CensusFamily::Gamma) {
        out.parameter = "n";
        // G(t, n) = (a t - b n) g(t, n)
        std::vector<std::string> tn{"t", "n"};
        MPoly g_tn(tn);
        for (const auto& [e, c] : inst.g.terms) g_tn.add_term({e[0], e[1], 0, 0}, c);
        MPoly lin(tn);
        lin.add_term({1, 0, 0, 0}, inst.a);
        lin.add_term({0, 1, 0, 0}, -inst.b);
        MPoly G = lin * g_tn;
        int Dt = G.degree_in(0);
        std::vector<MPoly> cols = collect(G, 0);
        Poly1 lead_n = to_poly1(cols[Dt], 1);   // lc_t as polynomial in n
        int ndeg_bound = (2 * Dt - 1) * std::max(1, G.degree_in(1));
        int vdeg_bound = 2 * Dt - 1;
        auto Dnv = interpolate_bivariate(
            [&](const mpz_class& n0, const mpz_class& v0) {
                Poly1 spec = slice_x_part(inst, n0) - Poly1::constant(v0, "t");
                return discriminant(spec);
            },
            ndeg_bound, vdeg_bound, {"n", "v"},
            [&](const mpz_class& n0) { return eval(lead_n, n0) != 0; });
        out.leading_coefficient = leading_in_param(Dnv, "gamma census");
        // predicted: Disc_t[(a t - b) g_{d-1}(t, 1)]
        MPoly gt1 = substitute_value(gtop, 1, 1);
        Poly1 gtop1 = to_poly1(gt1, 0);
        gtop1.var = "t";
        Poly1 lim = Poly1({-inst.b, inst.a}, "t") * gtop1;
        out.predicted_leading = discriminant(lim);
        // census polynomial: eliminate v against critical values of f - k
        Poly1 T = compose_linear(cv.cv, 1, inst.k);   // roots w - k
        T.var = "v";
        if (T.is_zero()) throw invariant_error("singular_census: empty shift polynomial");
        out.guard *= T.is_zero() ? mpz_class(1) : T.lc();
        MPoly Tm = from_poly1(T, 1, {"n", "v"});
        Poly1 census = resultant_bivariate(Dnv, Tm, 1);
        census.var = "n";
        if (census.is_zero())
            throw invariant_error("singular_census: identically vanishing census (Gamma)");
        out.disc_polynomial = census;
        out.integer_roots = window_roots(census, 1, B, false);
        // degenerate slices: t-degree drops; w=0 special value
        for (auto& r : window_roots(lead_n, 1, B, false)) out.degenerate_values.push_back(r);
        mpz_class e_d1_0 = inst.g.coeff({d - 1, 0, 0, 0});
        if (e_d1_0 == 0) {
            mpz_class e_d2_1 = inst.g.coeff({d - 2, 1, 0, 0});
            mpz_class e_d2_0 = inst.g.coeff({d - 2, 0, 0, 0});
            if (e_d2_1 == 0)
                throw invariant_error("singular_census: g_{d-1} has a square factor");
            mpz_class q, r;
            mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), mpz_class(-e_d2_0).get_mpz_t(),
                        e_d2_1.get_mpz_t());
            if (r == 0 && q >= 1 && q <= B) out.degenerate_values.push_back(q);
        } else {
            out.guard *= inst.a * e_d1_0;
        }
        out.guard *= out.leading_coefficient;
        return out;
    }

    // family K
    out.parameter = "h";
    MPoly Asym = symbolic_x_part(inst);
    int Dz = Asym.degree_in(0);
    int hdeg_bound = (2 * Dz - 1) * std::max(1, Asym.degree_in(1));
    int vdeg_bound = 2 * Dz - 1;
    auto Dhv = interpolate_bivariate(
        [&](const mpz_class& h0, const mpz_class& v0) {
            MPoly Ah = substitute_value(Asym, 1, h0);
            Poly1 A1 = to_poly1(Ah, 0);
            A1.var = "z";
            return discriminant(A1 - Poly1::constant(v0, "z"));
        },
        hdeg_bound, vdeg_bound, {"h", "v"},
        [&](const mpz_class& h0) { return h0 != 0; });
    out.leading_coefficient = leading_in_param(Dhv, "K census");
    out.predicted_leading = discriminant(limit_x_form(inst));
    // T_K(v): critical values of f shifted and scaled onto the A side:
    // v = scale (w - k) for critical values w of f
    mpz_class scale = mpz_pow_int(2 * inst.a * inst.b, d - 1);
    Poly1 TK({}, "v");
    {
        int dt = cv.cv.degree();
        // sum_i c_i (v + scale k)^i scale^{dt - i}
        Poly1 base({scale * inst.k, 1}, "v");
        Poly1 pw = Poly1::constant(1, "v");
        std::vector<Poly1> powers;
        for (int i = 0; i <= dt; ++i) {
            powers.push_back(pw);
            pw = pw * base;
        }
        for (int i = 0; i <= dt; ++i) {
            if (cv.cv.coeff[i] == 0) continue;
            TK = TK + (cv.cv.coeff[i] * mpz_pow_int(scale, dt - i)) * powers[i];
        }
    }
    if (TK.is_zero()) throw invariant_error("singular_census: empty K shift polynomial");
    out.guard *= TK.lc();
    MPoly TKm = from_poly1(TK, 1, {"h", "v"});
    Poly1 census = resultant_bivariate(Dhv, TKm, 1);
    census.var = "h";
    if (census.is_zero())
        throw invariant_error("singular_census: identically vanishing census (K)");
    out.disc_polynomial = census;
    out.integer_roots = window_roots(census, -B, B, true);
    out.guard *= out.leading_coefficient;
    return out;
}

mpz_class gamma_slice_exclusion(const GeneralInstance& inst, const SingularCensus& census,
                                i64 n) {
    if (census.family != CensusFamily::Gamma)
        throw invariant_error("gamma_slice_exclusion: Gamma census expected");
    mpz_class ex = census.guard;
    mpz_class cval = eval(census.disc_polynomial, mpz_class((long)n));
    if (cval == 0) throw invariant_error("gamma_slice_exclusion: slice flagged singular");
    ex *= cval;
    const int d = inst.degree();
    mpz_class e_d1_0 = inst.g.coeff({d - 1, 0, 0, 0});
    if (e_d1_0 == 0) {
        mpz_class e_d2_1 = inst.g.coeff({d - 2, 1, 0, 0});
        mpz_class e_d2_0 = inst.g.coeff({d - 2, 0, 0, 0});
        mpz_class w0 = inst.a * (e_d2_1 * n + e_d2_0);
        if (w0 != 0) ex *= w0;
    }
    Poly1 Gn = slice_x_part(inst, mpz_class((long)n));
    if (!Gn.is_zero()) ex *= Gn.lc();
    return ex;
}

MPoly gamma_slice_form(const GeneralInstance& inst, i64 n) {
    std::vector<std::string> v3{"x1", "x2", "x3"};
    MPoly aff(v3);
    for (const auto& [e, c] : inst.f.terms) aff.add_term({e[0], e[1], 0, 0}, c);
    Poly1 Gn = slice_x_part(inst, mpz_class((long)n));
    for (int i = 0; i <= Gn.degree(); ++i)
        aff.add_term({0, 0, i, 0}, -Gn.coeff[i]);
    aff.add_term({0, 0, 0, 0}, -inst.k);
    return homogenize(aff, inst.degree(), "w");
}

std::optional<std::vector<i64>> projective_singular_point(const MPoly& form, i64 p) {
    const int n = form.nvars;
    std::vector<MPoly> grads;
    for (int v = 0; v < n; ++v) grads.push_back(derivative(form, v));
    std::vector<i64> pt(n, 0);
    // representatives: first nonzero coordinate = 1
    for (int lead = 0; lead < n; ++lead) {
        std::fill(pt.begin(), pt.end(), 0);
        pt[lead] = 1;
        int free = n - lead - 1;
        u64 total = 1;
        for (int i = 0; i < free; ++i) total *= (u64)p;
        for (u64 step = 0; step < total; ++step) {
            u64 s = step;
            for (int i = 0; i < free; ++i) {
                pt[lead + 1 + i] = (i64)(s % (u64)p);
                s /= (u64)p;
            }
            if (eval_mod(form, pt, p) != 0) continue;
            bool sing = true;
            for (const auto& g : grads)
                if (eval_mod(g, pt, p) != 0) { sing = false; break; }
            if (sing) return pt;
        }
    }
    return std::nullopt;
}

} // namespace aet

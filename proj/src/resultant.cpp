#include "aet/resultant.hpp"

#include <algorithm>

namespace aet {

// Bareiss fraction-free determinant. Destroys its argument.
static mpz_class bareiss_det(std::vector<std::vector<mpz_class>>& m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    mpz_class denom = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), denom.get_mpz_t());
            }
            m[i][k] = 0;
        }
        denom = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : mpz_class(-m[n - 1][n - 1]);
}

mpz_class resultant(const Poly1& f, const Poly1& g) {
    int df = f.degree(), dg = g.degree();
    if (df < 0 || dg < 0) return 0;
    if (df == 0 && dg == 0) return 1;
    if (df == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), f.coeff[0].get_mpz_t(), dg);
        return r;
    }
    if (dg == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), g.coeff[0].get_mpz_t(), df);
        return r;
    }
    size_t n = df + dg;
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n, mpz_class(0)));
    for (int row = 0; row < dg; ++row)
        for (int i = 0; i <= df; ++i)
            m[row][row + i] = f.coeff[df - i];
    for (int row = 0; row < df; ++row)
        for (int i = 0; i <= dg; ++i)
            m[dg + row][row + i] = g.coeff[dg - i];
    return bareiss_det(m);
}

mpz_class discriminant(const Poly1& f) {
    int d = f.degree();
    if (d < 1) throw invariant_error("discriminant requires degree >= 1");
    if (d == 1) return 1;
    mpz_class res = resultant(f, derivative(f));
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), res.get_mpz_t(), f.lc().get_mpz_t());
    int e = (d * (d - 1) / 2) % 2;
    return e ? mpz_class(-q) : q;
}

mpz_class discriminant_form(const MPoly& F) {
    if (F.nvars != 2) throw invariant_error("discriminant_form: binary form expected");
    int n = F.total_degree();
    if (n < 1) throw invariant_error("discriminant_form: degree >= 1 expected");
    for (const auto& [e, c] : F.terms)
        if (e[0] + e[1] != n) throw invariant_error("discriminant_form: not homogeneous");
    if (n == 1) return 1;   // nonzero linear forms are squarefree
    MPoly Fx = derivative(F, 0), Fy = derivative(F, 1);
    if (Fx.is_zero() || Fy.is_zero()) return 0;
    // Resultant of two binary forms of degree n-1: Sylvester matrix in the
    // coefficient sequences (dehomogenized at y=1, padded to full length).
    auto coeffs = [n](const MPoly& G) {
        std::vector<mpz_class> c(n, mpz_class(0));  // degree n-1 form: n entries
        for (const auto& [e, cf] : G.terms) c[e[0]] = cf;
        return c;
    };
    std::vector<mpz_class> a = coeffs(Fx), b = coeffs(Fy);
    size_t m = 2 * (n - 1);
    if (m == 0) return 1;
    std::vector<std::vector<mpz_class>> mat(m, std::vector<mpz_class>(m, mpz_class(0)));
    for (int row = 0; row < n - 1; ++row)
        for (int i = 0; i < n; ++i)
            mat[row][row + i] = a[n - 1 - i];
    for (int row = 0; row < n - 1; ++row)
        for (int i = 0; i < n; ++i)
            mat[n - 1 + row][row + i] = b[n - 1 - i];
    return bareiss_det(mat);
}

int ParamPoly::main_degree() const {
    for (int i = (int)coeff.size() - 1; i >= 0; --i)
        if (!coeff[i].is_zero()) return i;
    return -1;
}

Poly1 ParamPoly::specialize(const mpz_class& value) const {
    std::vector<mpz_class> c(coeff.size());
    for (size_t i = 0; i < coeff.size(); ++i) c[i] = eval(coeff[i], value);
    return Poly1(std::move(c), main_var);
}

ParamPoly ParamPoly::from_mpoly(const MPoly& f, int main_index, int param_index) {
    ParamPoly r;
    r.main_var = f.vars[main_index];
    r.param = f.vars[param_index];
    int d = std::max(0, f.degree_in(main_index));
    r.coeff.assign(d + 1, Poly1({}, r.param));
    for (const auto& [e, c] : f.terms) {
        for (int v = 0; v < f.nvars; ++v)
            if (v != main_index && v != param_index && e[v] != 0)
                throw invariant_error("ParamPoly: extra variable present");
        Poly1& dst = r.coeff[e[main_index]];
        int k = e[param_index];
        if ((int)dst.coeff.size() <= k) dst.coeff.resize(k + 1, mpz_class(0));
        dst.coeff[k] += c;
    }
    for (auto& p : r.coeff) p.trim();
    return r;
}

Poly1 interpolate_integer(const std::vector<mpz_class>& xs,
                          const std::vector<mpz_class>& ys,
                          const std::string& var) {
    // Newton's divided differences over Q, then verify integrality.
    const size_t n = xs.size();
    if (ys.size() != n || n == 0) throw invariant_error("interpolate: bad input");
    std::vector<mpq_class> dd(n);
    for (size_t i = 0; i < n; ++i) dd[i] = mpq_class(ys[i]);
    for (size_t level = 1; level < n; ++level)
        for (size_t i = n - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / mpq_class(xs[i] - xs[i - level]);
            if (i == level) break;
        }
    // Horner over the Newton basis
    RatPoly1 acc({}, var);
    for (size_t i = n; i-- > 0;) {
        RatPoly1 lin({mpq_class(-xs[i]), mpq_class(1)}, var);
        acc = acc * lin + RatPoly1::constant(dd[i], var);
    }
    std::vector<mpz_class> c(acc.coeff.size());
    for (size_t i = 0; i < acc.coeff.size(); ++i) {
        if (acc.coeff[i].get_den() != 1)
            throw invariant_error("interpolate: non-integral interpolant");
        c[i] = acc.coeff[i].get_num();
    }
    return Poly1(std::move(c), var);
}

Poly1 disc_in_param(const ParamPoly& F) {
    int D = F.main_degree();
    if (D < 1) throw invariant_error("disc_in_param: generic degree >= 1 required");
    int cdeg = 0;
    for (const auto& p : F.coeff) cdeg = std::max(cdeg, p.degree());
    // Conservative degree bound for the discriminant in the parameter.
    int bound = (2 * D - 1) * std::max(1, cdeg);
    std::vector<mpz_class> xs, ys;
    mpz_class t = 0;
    long tried = 0;
    const Poly1& lead = F.coeff[D];
    while ((int)xs.size() < bound + 1) {
        if (++tried > 8 * (bound + 2) + 64)
            throw invariant_error("disc_in_param: all sampled degrees degenerate");
        // walk 0, 1, -1, 2, -2, ...
        if (t > 0) t = -t; else t = -t + 1;
        if (eval(lead, t) == 0) continue;   // degree drop at this node
        Poly1 spec = F.specialize(t);
        xs.push_back(t);
        ys.push_back(discriminant(spec));
    }
    return interpolate_integer(xs, ys, F.param);
}

Poly1 resultant_bivariate(const MPoly& a, const MPoly& b, int elim) {
    if (a.nvars != 2 || b.nvars != 2)
        throw invariant_error("resultant_bivariate: bivariate inputs expected");
    const int keep = 1 - elim;
    int da = a.degree_in(elim), db = b.degree_in(elim);
    if (da < 0 || db < 0) return Poly1({}, a.vars[keep]);
    // leading coefficients in the eliminated variable, as polynomials in keep
    auto lead_in = [&](const MPoly& g, int dg) {
        std::vector<MPoly> cs = collect(g, elim);
        return to_poly1(cs[dg], keep);
    };
    Poly1 la = lead_in(a, da), lb = lead_in(b, db);
    int bound = da * std::max(0, b.degree_in(keep)) + db * std::max(0, a.degree_in(keep));
    std::vector<mpz_class> xs, ys;
    mpz_class t = 0;
    long tried = 0;
    while ((int)xs.size() < bound + 1) {
        if (++tried > 8 * (bound + 2) + 64)
            throw invariant_error("resultant_bivariate: no usable nodes");
        if (t > 0) t = -t; else t = -t + 1;
        if (eval(la, t) == 0 || eval(lb, t) == 0) continue;
        MPoly as = substitute_value(a, keep, t);
        MPoly bs = substitute_value(b, keep, t);
        xs.push_back(t);
        ys.push_back(resultant(to_poly1(as, elim), to_poly1(bs, elim)));
    }
    return interpolate_integer(xs, ys, a.vars[keep]);
}

CriticalValues critical_value_polynomial(const MPoly& f) {
    if (f.nvars != 2) throw invariant_error("critical_value_polynomial: bivariate input expected");
    MPoly fx = derivative(f, 0), fy = derivative(f, 1);
    if (fx.is_zero() || fy.is_zero())
        throw invariant_error("critical_value_polynomial: degenerate gradient");
    CriticalValues out;
    Poly1 R2 = resultant_bivariate(fx, fy, 1);   // eliminate y -> poly in x
    if (R2.is_zero())
        throw invariant_error("critical_value_polynomial: partials share a factor");
    out.guard *= R2.lc();
    if (R2.degree() == 0) {
        // no common zeros over the closure
        out.cv = Poly1({R2.coeff[0]}, "v");
        out.cv = primitive_part(out.cv);
        out.empty = true;
        return out;
    }
    // R1(x, v) = Res_y(f - v, fy)
    int dyf = f.degree_in(1), dyfy = fy.degree_in(1);
    std::vector<MPoly> fcols = collect(f, 1), fycols = collect(fy, 1);
    Poly1 lcyf = to_poly1(fcols[dyf], 0), lcyfy = to_poly1(fycols[dyfy], 0);
    out.guard *= lcyf.is_zero() ? mpz_class(1) : content(lcyf);
    int deg_x_bound = dyf * std::max(0, fy.degree_in(0)) + dyfy * std::max(0, f.degree_in(0));
    int deg_v_bound = dyfy;
    std::vector<std::string> xv{"x", "v"};
    auto node_ok = [&](const mpz_class& x0) {
        return eval(lcyf, x0) != 0 && eval(lcyfy, x0) != 0;
    };
    MPoly R1 = interpolate_bivariate(
        [&](const mpz_class& x0, const mpz_class& v0) {
            MPoly fs = substitute_value(f, 0, x0);
            MPoly fys = substitute_value(fy, 0, x0);
            Poly1 fy1 = to_poly1(fys, 1);
            Poly1 f1 = to_poly1(fs, 1) - Poly1::constant(v0, f.vars[1]);
            return resultant(f1, fy1);
        },
        deg_x_bound, deg_v_bound, xv, node_ok);
    if (R1.is_zero())
        throw invariant_error("critical_value_polynomial: vanishing inner resultant");
    // CV(v) = Res_x(R1(., v), R2)
    Poly1 CV = resultant_bivariate(R1, from_poly1(R2, 0, xv), 0);
    CV.var = "v";
    if (CV.is_zero())
        throw invariant_error("critical_value_polynomial: vanishing elimination");
    out.guard *= CV.lc();
    if (CV.degree() == 0) {
        out.cv = primitive_part(CV);
        out.empty = true;
        return out;
    }
    RatPoly1 sf = squarefree_part(RatPoly1::from_int(CV));
    out.cv = clear_denominators(sf);
    out.cv.var = "v";
    out.empty = false;
    return out;
}

MPoly interpolate_bivariate(const std::function<mpz_class(const mpz_class&, const mpz_class&)>& f,
                            int deg1, int deg2,
                            const std::vector<std::string>& names,
                            const std::function<bool(const mpz_class&)>& node1_ok) {
    // nodes for variable 1
    std::vector<mpz_class> n1;
    mpz_class t = 0;
    long tried = 0;
    while ((int)n1.size() < deg1 + 1) {
        if (++tried > 8 * (deg1 + 2) + 64)
            throw invariant_error("interpolate_bivariate: no usable nodes");
        if (t > 0) t = -t; else t = -t + 1;
        if (node1_ok && !node1_ok(t)) continue;
        n1.push_back(t);
    }
    std::vector<mpz_class> n2;
    for (int i = 0; i <= deg2; ++i) n2.push_back(i);
    // for each node in var1, interpolate in var2
    std::vector<Poly1> rows;   // polynomial in var2
    for (const auto& a : n1) {
        std::vector<mpz_class> ys;
        for (const auto& b : n2) ys.push_back(f(a, b));
        rows.push_back(interpolate_integer(n2, ys, names[1]));
    }
    // interpolate each var2-coefficient in var1
    size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.coeff.size());
    MPoly out(names);
    for (size_t j = 0; j < width; ++j) {
        std::vector<mpz_class> ys;
        for (const auto& r : rows) ys.push_back(j < r.coeff.size() ? r.coeff[j] : mpz_class(0));
        Poly1 cj = interpolate_integer(n1, ys, names[0]);
        for (int i = 0; i <= cj.degree(); ++i) {
            if (cj.coeff[i] == 0) continue;
            MPoly::Exp e{0, 0, 0, 0};
            e[0] = i;
            e[1] = (int)j;
            out.add_term(e, cj.coeff[i]);
        }
    }
    return out;
}

} // namespace aet

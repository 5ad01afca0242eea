#include "aet/ffield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aet/resultant.hpp"

namespace aet {

namespace {

constexpr double kPi = 3.14159265358979323846;

// roots of unity table for modulus m: w[r] = e(2 pi i r / m)
std::vector<std::complex<double>> unit_roots(i64 m) {
    std::vector<std::complex<double>> w((size_t)m);
    for (i64 r = 0; r < m; ++r) {
        double a = 2.0 * kPi * (double)r / (double)m;
        w[r] = {std::cos(a), std::sin(a)};
    }
    return w;
}

mpz_class mpz_pow_int(const mpz_class& b, unsigned e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Extension fields
// ---------------------------------------------------------------------------

namespace {

// polynomial arithmetic mod (p, m) with m monic
using FpPoly = std::vector<i64>;

FpPoly fp_trim(FpPoly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, i64 p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    // reduce by monic m
    int dm = (int)m.size() - 1;
    for (int i = (int)c.size() - 1; i >= dm; --i) {
        i64 f = c[i];
        if (f == 0) continue;
        c[i] = 0;
        for (int k = 0; k < dm; ++k)
            c[i - dm + k] = mod_reduce(c[i - dm + k] - f * m[k], p);
    }
    c.resize(dm);
    return fp_trim(c);
}

FpPoly fp_powmod_x(u64 e, const FpPoly& m, i64 p) {
    // x^e mod m
    FpPoly result{1};
    FpPoly base{0, 1};
    if ((int)m.size() - 1 == 1) base = fp_trim({mod_reduce(-m[0] * 1, p)});
    while (e) {
        if (e & 1) result = fp_mulmod(result, base, m, p);
        base = fp_mulmod(base, base, m, p);
        e >>= 1;
    }
    return result;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, i64 p) {
    a = fp_trim(std::move(a));
    b = fp_trim(std::move(b));
    while (!b.empty()) {
        // a mod b
        i64 inv = invmod_i64(b.back(), p);
        FpPoly r = a;
        for (int i = (int)r.size() - 1; i >= (int)b.size() - 1; --i) {
            if (r[i] == 0) continue;
            i64 f = r[i] * inv % p;
            for (size_t k = 0; k < b.size(); ++k)
                r[i - (b.size() - 1) + k] = mod_reduce(r[i - (b.size() - 1) + k] - f * b[k], p);
        }
        a = std::move(b);
        b = fp_trim(std::move(r));
    }
    return a;
}

bool fp_irreducible(const FpPoly& m, i64 p) {
    int j = (int)m.size() - 1;
    if (j == 1) return true;
    for (int i = 1; i < j; ++i) {
        u64 e = 1;
        for (int t = 0; t < i; ++t) e *= (u64)p;
        FpPoly xe = fp_powmod_x(e, m, p);
        // xe - x
        FpPoly diff = xe;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = mod_reduce(diff[1] - 1, p);
        diff = fp_trim(std::move(diff));
        FpPoly g = fp_gcd(m, diff, p);
        if ((int)g.size() - 1 != 0) return false;
    }
    return true;
}

} // namespace

ExtField::ExtField(i64 prime, int degree) : p(prime), j(degree) {
    if (!is_prime_u64((u64)p)) throw invariant_error("ExtField: p must be prime");
    if (j < 1 || j > 6) throw invariant_error("ExtField: degree 1..6 supported");
    if (j == 1) {
        modulus = {0, 1};
        return;
    }
    // lexicographic over monic m = t^j + c_{j-1} t^{j-1} + ... + c_0,
    // most significant coefficient first
    u64 total = 1;
    for (int i = 0; i < j; ++i) total *= (u64)p;
    for (u64 code = 0; code < total; ++code) {
        FpPoly m(j + 1, 0);
        m[j] = 1;
        u64 c = code;
        for (int i = j - 1; i >= 0; --i) {
            m[i] = (i64)(c % (u64)p);
            c /= (u64)p;
        }
        // code digits: c_0 least significant -> vary fastest
        if (fp_irreducible(m, p)) {
            modulus = m;
            return;
        }
    }
    throw invariant_error("ExtField: no irreducible modulus found");
}

u64 ExtField::size() const {
    u64 s = 1;
    for (int i = 0; i < j; ++i) s *= (u64)p;
    return s;
}

ExtField::Elem ExtField::decode(u64 index) const {
    Elem e((size_t)j, 0);
    for (int i = 0; i < j; ++i) {
        e[i] = (i64)(index % (u64)p);
        index /= (u64)p;
    }
    return e;
}

u64 ExtField::encode(const Elem& e) const {
    u64 idx = 0;
    for (int i = j - 1; i >= 0; --i) idx = idx * (u64)p + (u64)e[i];
    return idx;
}

ExtField::Elem ExtField::add(const Elem& a, const Elem& b) const {
    Elem c((size_t)j, 0);
    for (int i = 0; i < j; ++i) c[i] = (a[i] + b[i]) % p;
    return c;
}

ExtField::Elem ExtField::mul(const Elem& a, const Elem& b) const {
    FpPoly fa(a.begin(), a.end()), fb(b.begin(), b.end());
    FpPoly c = fp_mulmod(fp_trim(fa), fp_trim(fb), modulus, p);
    Elem out((size_t)j, 0);
    for (size_t i = 0; i < c.size(); ++i) out[i] = c[i];
    return out;
}

ExtField::Elem ExtField::from_int(const mpz_class& c) const {
    Elem e((size_t)j, 0);
    e[0] = mod_reduce(c, p);
    return e;
}

ExtField::Elem ExtField::eval(const MPoly& F, const std::vector<Elem>& point) const {
    if ((int)point.size() != F.nvars) throw invariant_error("ExtField::eval arity mismatch");
    int maxdeg = 0;
    for (const auto& [e, c] : F.terms)
        for (int v = 0; v < F.nvars; ++v) maxdeg = std::max(maxdeg, e[v]);
    std::vector<std::vector<Elem>> pw(F.nvars);
    for (int v = 0; v < F.nvars; ++v) {
        pw[v].resize(maxdeg + 1, from_int(1));
        for (int k = 1; k <= maxdeg; ++k) pw[v][k] = mul(pw[v][k - 1], point[v]);
    }
    Elem acc((size_t)j, 0);
    for (const auto& [e, c] : F.terms) {
        Elem t = from_int(c);
        for (int v = 0; v < F.nvars; ++v) t = mul(t, pw[v][e[v]]);
        acc = add(acc, t);
    }
    return acc;
}

bool ExtField::is_zero(const Elem& e) const {
    for (i64 c : e)
        if (c != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------

int local_count_vp(const Poly1& Q, i64 p, bool degenerate_ok) {
    if (!is_prime_u64((u64)p)) throw invariant_error("local_count_vp: p must be prime");
    // reduce mod p
    FpPoly q;
    for (const auto& c : Q.coeff) q.push_back(mod_reduce(c, p));
    q = fp_trim(std::move(q));
    if (q.empty()) {
        if (degenerate_ok) return (int)std::min<i64>(p, 1 << 30);
        throw invariant_error("local_count_vp: specialization vanishes mod p");
    }
    if ((int)q.size() - 1 == 0) return 0;
    // normalize to monic (root set unchanged)
    if (q.back() != 1) {
        i64 inv = invmod_i64(q.back(), p);
        for (auto& c : q) c = c * inv % p;
    }
    if (p < (1 << 14)) {
        int cnt = 0;
        for (i64 x = 0; x < p; ++x) {
            i64 acc = 0;
            for (auto it = q.rbegin(); it != q.rend(); ++it) acc = (acc * x + *it) % p;
            if (acc == 0) ++cnt;
        }
        return cnt;
    }
    // deg gcd(x^p - x, q)
    FpPoly xp = fp_powmod_x((u64)p, q, p);
    FpPoly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = mod_reduce(diff[1] - 1, p);
    FpPoly g = fp_gcd(q, fp_trim(std::move(diff)), p);
    return (int)g.size() - 1;
}

// ---------------------------------------------------------------------------
// Surface construction
// ---------------------------------------------------------------------------

namespace {

mpz_class binom(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// A(z) = scale * h * g((z+h)/2a, (z-h)/2b), expanded exactly over Z.
Poly1 transformed_x_part(const GeneralInstance& inst, const mpz_class& h) {
    const int d = inst.degree();
    std::vector<mpz_class> acc((size_t)d, 0);   // degree <= d-1
    for (const auto& [e, c] : inst.g.terms) {
        int i = e[0], jj = e[1];
        // scale/( (2a)^i (2b)^j ) = 2^{d-1-i-j} a^{d-1-i} b^{d-1-j}
        mpz_class unit = mpz_pow_int(2, d - 1 - i - jj) *
                         mpz_pow_int(inst.a, d - 1 - i) * mpz_pow_int(inst.b, d - 1 - jj);
        unit *= c * h;
        // (z+h)^i (z-h)^j
        std::vector<mpz_class> zp((size_t)i + 1), zm((size_t)jj + 1);
        for (int u = 0; u <= i; ++u) zp[u] = binom(i, u) * mpz_pow_int(h, i - u);
        for (int u = 0; u <= jj; ++u) {
            mpz_class t = binom(jj, u) * mpz_pow_int(h, jj - u);
            zm[u] = ((jj - u) % 2) ? mpz_class(-t) : t;
        }
        for (int u = 0; u <= i; ++u)
            for (int w = 0; w <= jj; ++w)
                acc[u + w] += unit * zp[u] * zm[w];
    }
    return Poly1(std::move(acc), "z");
}

// [A(x) - A(y)] / (x - y) as an explicit cofactor expansion.
MPoly difference_cofactor(const Poly1& A) {
    std::vector<std::string> xy{"x", "y"};
    MPoly P(xy);
    for (int m = 1; m <= A.degree(); ++m) {
        if (A.coeff[m] == 0) continue;
        for (int u = 0; u < m; ++u)
            P.add_term({u, m - 1 - u, 0, 0}, A.coeff[m]);
    }
    return P;
}

} // namespace

SieveSurface build_sieve_surface(const GeneralInstance& inst, const mpz_class& h) {
    inst.validate();
    const int d = inst.degree();
    if (d < 3 || d > 4)
        throw invariant_error("build_sieve_surface: degree 3 or 4 required");
    if (h == 0) throw invariant_error("build_sieve_surface: h must be nonzero");

    SieveSurface s;
    s.inst = inst;
    s.h = h;
    s.scale = mpz_pow_int(2 * inst.a * inst.b, d - 1);
    s.A = transformed_x_part(inst, h);

    // K affine: scale*f(x,y) - A(z) - scale*k, then homogenize to degree d.
    std::vector<std::string> xyz{"x", "y", "z"};
    MPoly Kaff(xyz);
    for (const auto& [e, c] : inst.f.terms)
        Kaff.add_term({e[0], e[1], 0, 0}, s.scale * c);
    for (int i = 0; i <= s.A.degree(); ++i)
        Kaff.add_term({0, 0, i, 0}, -s.A.coeff[i]);
    Kaff.add_term({0, 0, 0, 0}, -s.scale * inst.k);
    s.K = homogenize(Kaff, d, "w");

    // P: cofactor of A(x) - A(y) by (x - y), homogenized to degree d-2.
    MPoly Paff = difference_cofactor(s.A);
    {
        // exactness check: (x - y) * P == A(x) - A(y)
        std::vector<std::string> xy{"x", "y"};
        MPoly lin(xy);
        lin.add_term({1, 0, 0, 0}, 1);
        lin.add_term({0, 1, 0, 0}, -1);
        MPoly diff(xy);
        for (int i = 0; i <= s.A.degree(); ++i) {
            if (s.A.coeff[i] == 0) continue;
            diff.add_term({i, 0, 0, 0}, s.A.coeff[i]);
            diff.add_term({0, i, 0, 0}, -s.A.coeff[i]);
        }
        if (!(lin * Paff == diff))
            throw invariant_error("build_sieve_surface: cofactor division failed");
    }
    s.P = homogenize(Paff, d - 2, "w");

    // g_{d-1}(b,a)
    MPoly gtop = homogeneous_part(inst.g, d - 1);
    s.g_lead = eval(gtop, std::vector<mpz_class>{inst.b, inst.a});
    if (s.g_lead == 0)
        throw invariant_error("build_sieve_surface: g_{d-1}(b,a) = 0 (hypothesis (3) fails)");

    // leading coefficient of the detection polynomial
    if (s.A.lc() != s.h * s.g_lead)
        throw invariant_error("build_sieve_surface: unexpected leading coefficient");

    // ---- exclusion product ----
    MPoly fd = homogeneous_part(inst.f, d);
    mpz_class disc_fd = discriminant_form(fd);
    if (disc_fd == 0)
        throw invariant_error("build_sieve_surface: f_d not squarefree (hypothesis (2) fails)");
    mpz_class excl = 6 * inst.a * inst.b * s.g_lead * content(fd) * disc_fd * h;

    // P-side: content always; conic determinant when d = 4
    excl *= content(Paff);
    if (d == 4) {
        // P = g2 x^2 + g1 xy + g0 y^2 + c2x xw + c2y yw + c3 w^2 (symmetric in x,y)
        mpz_class g2 = s.P.coeff({2, 0, 0, 0});
        mpz_class g1 = s.P.coeff({1, 1, 0, 0});
        mpz_class g0 = s.P.coeff({0, 2, 0, 0});
        mpz_class c2x = s.P.coeff({1, 0, 1, 0});
        mpz_class c2y = s.P.coeff({0, 1, 1, 0});
        mpz_class c3 = s.P.coeff({0, 0, 2, 0});
        // doubled symmetric matrix determinant
        mpz_class m00 = 2 * g2, m01 = g1, m02 = c2x;
        mpz_class m11 = 2 * g0, m12 = c2y, m22 = 2 * c3;
        mpz_class det = m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) +
                        m02 * (m01 * m12 - m11 * m02);
        if (det == 0)
            throw invariant_error("build_sieve_surface: P is a singular conic for this h");
        excl *= det;
    }

    // K-side: w=1 singular points need a critical value of f to meet a
    // critical value of A after the scale/k shift.
    CriticalValues cv = critical_value_polynomial(inst.f);
    excl *= cv.guard;
    Poly1 Ap = derivative(s.A);
    // V2(u) = Res_z(A(z) - u, A'(z))
    std::vector<std::string> zu{"z", "u"};
    MPoly Au(zu);
    for (int i = 0; i <= s.A.degree(); ++i)
        if (s.A.coeff[i] != 0) Au.add_term({i, 0, 0, 0}, s.A.coeff[i]);
    Au.add_term({0, 1, 0, 0}, -1);
    MPoly ApM(zu);
    for (int i = 0; i <= Ap.degree(); ++i)
        if (Ap.coeff[i] != 0) ApM.add_term({i, 0, 0, 0}, Ap.coeff[i]);
    Poly1 V2 = resultant_bivariate(Au, ApM, 0);   // polynomial in u
    if (V2.is_zero())
        throw invariant_error("build_sieve_surface: degenerate critical elimination for A");
    excl *= V2.lc();
    // E_K = Res_v(cv(v), V2(scale*(v - k)))
    Poly1 V2shift = compose_linear(V2, s.scale, -s.scale * inst.k);
    V2shift.var = "v";
    mpz_class EK = resultant(cv.cv, V2shift);
    if (EK == 0)
        throw invariant_error("build_sieve_surface: K is singular for this h");
    excl *= EK;
    excl *= s.A.lc();
    excl *= Ap.lc();

    s.exclusion = excl;
    return s;
}

bool admissible_prime(const SieveSurface& s, i64 p) {
    if (!is_prime_u64((u64)p)) return false;
    return !mpz_divisible_ui_p(s.exclusion.get_mpz_t(), (unsigned long)p);
}

std::vector<i64> admissible_primes(const SieveSurface& s, i64 Q) {
    std::vector<i64> out;
    for (i64 p = 2; p <= Q; ++p)
        if (is_prime_u64((u64)p) && admissible_prime(s, p)) out.push_back(p);
    return out;
}

LocalCounts local_count_table(const SieveSurface& s, i64 p) {
    LocalCounts t;
    t.p = p;
    t.roots_by_value.assign((size_t)p, 0);
    for (i64 z = 0; z < p; ++z)
        t.roots_by_value[(size_t)eval_mod(s.A, z, p)] += 1;
    t.v.assign((size_t)p * p, 0);
    // value(x,y) = scale * (f(x,y) - k) mod p
    i64 scale = mod_reduce(s.scale, p);
    i64 kk = mod_reduce(s.inst.k, p);
    std::vector<MPoly> cols = collect(s.inst.f, 1);
    std::vector<Poly1> colp;
    for (auto& c : cols) colp.push_back(to_poly1(c, 0));
    for (i64 x = 0; x < p; ++x) {
        // Horner in y with per-x coefficients
        std::vector<i64> cx(colp.size());
        for (size_t i = 0; i < colp.size(); ++i) cx[i] = eval_mod(colp[i], x, p);
        for (i64 y = 0; y < p; ++y) {
            i64 fv = 0;
            for (size_t i = colp.size(); i-- > 0;) fv = (fv * y + cx[i]) % p;
            i64 val = mod_reduce(scale * mod_reduce(fv - kk + p, p), p);
            int cnt = t.roots_by_value[(size_t)val];
            t.v[(size_t)(x * p + y)] = cnt;
            t.vmax = std::max(t.vmax, cnt);
        }
    }
    return t;
}

ExpSumValue sigma_t(const LocalCounts& tab, int t, i64 M, i64 N) {
    if (t < 0 || t > 4) throw invariant_error("sigma_t: t in 0..4 required");
    const i64 p = tab.p;
    StopWatch sw;
    ExpSumValue out;
    auto w = unit_roots(p);
    i64 Mr = mod_reduce(mpz_class((long)M), p), Nr = mod_reduce(mpz_class((long)N), p);
    KahanSum re, im;
    bool integral = (Mr == 0 && Nr == 0);
    mpz_class exact = 0;
    for (i64 x = 0; x < p; ++x) {
        i64 base = Mr * x % p;
        for (i64 y = 0; y < p; ++y) {
            int v = tab.v[(size_t)(x * p + y)];
            i64 pw = 1;
            for (int i = 0; i < t; ++i) pw *= v;
            if (integral) {
                exact += pw;
            } else {
                i64 r = (base + Nr * y) % p;
                re.add(pw * w[r].real());
                im.add(pw * w[r].imag());
            }
        }
    }
    out.summands = (u64)p * p;
    if (integral) {
        out.exact = exact;
        out.re = exact.get_d();
        out.im = 0.0;
    } else {
        out.re = re.value();
        out.im = im.value();
    }
    out.millis = sw.ms();
    return out;
}

ExpSumValue sigma_t(const SieveSurface& s, int t, i64 p, i64 M, i64 N) {
    LocalCounts tab = local_count_table(s, p);
    return sigma_t(tab, t, M, N);
}

std::vector<std::complex<double>> sigma1_grid(const LocalCounts& tab) {
    const i64 p = tab.p;
    auto w = unit_roots(p);
    // rows[x][N] = sum_y v(x,y) e(Ny/p)
    std::vector<std::complex<double>> rows((size_t)p * p);
    for (i64 x = 0; x < p; ++x)
        for (i64 N = 0; N < p; ++N) {
            std::complex<double> acc{0, 0};
            for (i64 y = 0; y < p; ++y)
                acc += (double)tab.v[(size_t)(x * p + y)] * w[(size_t)(N * y % p)];
            rows[(size_t)(x * p + N)] = acc;
        }
    std::vector<std::complex<double>> grid((size_t)p * p);
    for (i64 M = 0; M < p; ++M)
        for (i64 N = 0; N < p; ++N) {
            std::complex<double> acc{0, 0};
            for (i64 x = 0; x < p; ++x)
                acc += w[(size_t)(M * x % p)] * rows[(size_t)(x * p + N)];
            grid[(size_t)(M * p + N)] = acc;
        }
    return grid;
}

ExpSumValue phi_sum(const GeneralInstance& inst, i64 h, i64 M, i64 N) {
    if (h < 1) throw invariant_error("phi_sum: h >= 1 required");
    StopWatch sw;
    ExpSumValue out;
    const int d = inst.degree();
    mpz_class scale_z = mpz_pow_int(2 * inst.a * inst.b, d - 1);
    i64 scale = mod_reduce(scale_z, h);
    i64 target = mod_reduce(scale_z * inst.k, h);
    auto w = unit_roots(h);
    i64 Mr = mod_reduce(mpz_class((long)M), h), Nr = mod_reduce(mpz_class((long)N), h);
    std::vector<MPoly> cols = collect(inst.f, 1);
    std::vector<Poly1> colp;
    for (auto& c : cols) colp.push_back(to_poly1(c, 0));
    KahanSum re, im;
    mpz_class exact = 0;
    bool integral = (Mr == 0 && Nr == 0);
    for (i64 x = 0; x < h; ++x) {
        std::vector<i64> cx(colp.size());
        for (size_t i = 0; i < colp.size(); ++i) cx[i] = eval_mod(colp[i], x, h);
        i64 base = Mr * x % h;
        for (i64 y = 0; y < h; ++y) {
            i64 fv = 0;
            for (size_t i = colp.size(); i-- > 0;) fv = (fv * y + cx[i]) % h;
            if (mod_reduce(scale * fv - target, h) != 0) continue;
            if (integral) {
                exact += 1;
            } else {
                i64 r = (base + Nr * y) % h;
                re.add(w[r].real());
                im.add(w[r].imag());
            }
        }
    }
    out.summands = (u64)h * h;
    if (integral) {
        out.exact = exact;
        out.re = exact.get_d();
        out.im = 0.0;
    } else {
        out.re = re.value();
        out.im = im.value();
    }
    out.millis = sw.ms();
    return out;
}

PsiContext make_psi_context(const SieveSurface& s, i64 p, i64 q) {
    mpz_class habs = abs(s.h);
    if (mpz_gcd_ui(nullptr, habs.get_mpz_t(), (unsigned long)(p * q)) != 1)
        throw invariant_error("psi: gcd(pq, h) must be 1");
    PsiContext ctx;
    ctx.surface = &s;
    ctx.p = p;
    ctx.q = q;
    i64 h = habs.get_si();
    ctx.modulus = p * q * h;
    const i64 P = ctx.modulus;
    LocalCounts tp = local_count_table(s, p);
    LocalCounts tq = local_count_table(s, q);
    // congruence: scale * f(r,s) = scale * k  (mod h)
    mpz_class scale_z = s.scale;
    i64 scale = mod_reduce(scale_z, h);
    i64 target = mod_reduce(scale_z * s.inst.k, h);
    std::vector<MPoly> cols = collect(s.inst.f, 1);
    std::vector<Poly1> colp;
    for (auto& c : cols) colp.push_back(to_poly1(c, 0));
    for (i64 r = 0; r < P; ++r) {
        std::vector<i64> cx(colp.size());
        for (size_t i = 0; i < colp.size(); ++i) cx[i] = eval_mod(colp[i], r, h);
        for (i64 sres = 0; sres < P; ++sres) {
            i64 fv = 0;
            for (size_t i = colp.size(); i-- > 0;) fv = (fv * sres + cx[i]) % h;
            if (mod_reduce(scale * fv - target, h) != 0) continue;
            ctx.members.push_back({r, sres});
            ctx.vp.push_back(tp.v[(size_t)((r % p) * p + (sres % p))]);
            ctx.vq.push_back(tq.v[(size_t)((r % q) * q + (sres % q))]);
        }
    }
    return ctx;
}

ExpSumValue psi_direct(const PsiContext& ctx, int i, int j, i64 m, i64 n) {
    StopWatch sw;
    const i64 P = ctx.modulus;
    auto w = unit_roots(P);
    i64 mr = mod_reduce(mpz_class((long)m), P), nr = mod_reduce(mpz_class((long)n), P);
    KahanSum re, im;
    mpz_class exact = 0;
    bool integral = (mr == 0 && nr == 0);
    for (size_t t = 0; t < ctx.members.size(); ++t) {
        i64 vp = 1, vq = 1;
        for (int u = 0; u < i; ++u) vp *= ctx.vp[t];
        for (int u = 0; u < j; ++u) vq *= ctx.vq[t];
        i64 weight = vp * vq;
        if (weight == 0) continue;
        if (integral) {
            exact += weight;
        } else {
            i64 r = (mr * ctx.members[t].first + nr * ctx.members[t].second) % P;
            re.add(weight * w[r].real());
            im.add(weight * w[r].imag());
        }
    }
    ExpSumValue out;
    out.summands = (u64)P * P;
    if (integral) {
        out.exact = exact;
        out.re = exact.get_d();
    } else {
        out.re = re.value();
        out.im = im.value();
    }
    out.millis = sw.ms();
    return out;
}

ExpSumValue psi_factored(const SieveSurface& s, int i, int j, i64 m, i64 n, i64 p, i64 q) {
    mpz_class habs = abs(s.h);
    i64 h = habs.get_si();
    if (std::gcd((long)(p * q), (long)h) != 1)
        throw invariant_error("psi: gcd(pq, h) must be 1");
    StopWatch sw;
    ExpSumValue out;
    std::complex<double> val;
    if (p != q) {
        // pp' + qq' = 1 ; pq pqbar + h hbar = 1
        i64 pp, qp;
        egcd_i64(p, q, pp, qp);       // p*pp + q*qp = 1
        i64 pqbar, hbar;
        egcd_i64(p * q, h, pqbar, hbar);   // pq*pqbar + h*hbar = 1
        // arguments: Sigma_i(p; hbar q' m, hbar q' n), Sigma_j(q; hbar p' m, hbar p' n),
        // Phi(h; pqbar m, pqbar n)
        LocalCounts tp = local_count_table(s, p);
        LocalCounts tq = local_count_table(s, q);
        auto a1 = sigma_t(tp, i, mod_reduce(mpz_class(hbar) * qp % p * m, p),
                          mod_reduce(mpz_class(hbar) * qp % p * n, p));
        auto a2 = sigma_t(tq, j, mod_reduce(mpz_class(hbar) * pp % q * m, q),
                          mod_reduce(mpz_class(hbar) * pp % q * n, q));
        auto a3 = phi_sum(s.inst, h, mod_reduce(mpz_class(pqbar) * m, h),
                          mod_reduce(mpz_class(pqbar) * n, h));
        val = a1.value() * a2.value() * a3.value();
        out.summands = a1.summands + a2.summands + a3.summands;
    } else {
        if (m % p != 0 || n % p != 0) {
            out.re = 0;
            out.im = 0;
            out.exact = 0;
            out.millis = sw.ms();
            return out;
        }
        i64 m1 = m / p, n1 = n / p;
        i64 pbar, hbar;
        egcd_i64(p, h, pbar, hbar);   // p*pbar + h*hbar = 1
        LocalCounts tp = local_count_table(s, p);
        auto a1 = sigma_t(tp, i + j, mod_reduce(mpz_class(hbar) * m1, p),
                          mod_reduce(mpz_class(hbar) * n1, p));
        auto a3 = phi_sum(s.inst, h, mod_reduce(mpz_class(pbar) * m1, h),
                          mod_reduce(mpz_class(pbar) * n1, h));
        val = (double)(p * p) * a1.value() * a3.value();
        out.summands = a1.summands + a3.summands;
    }
    out.re = val.real();
    out.im = val.imag();
    out.millis = sw.ms();
    return out;
}

MomentStatistic moment_statistic(const MPoly& F, const std::vector<MPoly>& constraints,
                                 const ExtField& field, double expected,
                                 const Budget& budget) {
    const int n = F.nvars;
    for (const auto& G : constraints)
        if (G.nvars != n) throw invariant_error("moment_statistic: arity mismatch");
    u64 total = 1;
    for (int v = 0; v < n; ++v) {
        total *= field.size();
        budget.check_items(total, "moment enumeration");
    }
    MomentStatistic out;
    out.counts.assign(field.size(), 0);
    std::vector<ExtField::Elem> point(n);
    std::vector<u64> idx(n, 0);
    // odometer over F_{p^j}^n
    for (u64 step = 0; step < total; ++step) {
        u64 s = step;
        for (int v = 0; v < n; ++v) {
            idx[v] = s % field.size();
            s /= field.size();
        }
        for (int v = 0; v < n; ++v) point[v] = field.decode(idx[v]);
        bool ok = true;
        for (const auto& G : constraints)
            if (!field.is_zero(field.eval(G, point))) { ok = false; break; }
        if (!ok) continue;
        ++out.points;
        out.counts[field.encode(field.eval(F, point))] += 1;
    }
    KahanSum sm;
    for (u64 c : out.counts) {
        double d = (double)c - expected;
        sm.add(d * d);
    }
    out.second_moment = sm.value();
    return out;
}

u64 projective_point_count(const MPoly& form, i64 p, const Budget& budget) {
    const int n = form.nvars;
    u64 total = 1;
    for (int v = 0; v < n; ++v) {
        total *= (u64)p;
        budget.check_items(total, "projective enumeration");
    }
    // affine cone count, then (cone - 1)/(p - 1)
    u64 cone = 0;
    std::vector<i64> point(n, 0);
    for (u64 step = 0; step < total; ++step) {
        u64 s = step;
        for (int v = 0; v < n; ++v) {
            point[v] = (i64)(s % (u64)p);
            s /= (u64)p;
        }
        if (eval_mod(form, point, p) == 0) ++cone;
    }
    return (cone - 1) / ((u64)p - 1);
}

SigmaCombinatorics sigma_combinatorics(const SieveSurface& s, i64 p, int t) {
    if (t < 1 || t > 4) throw invariant_error("sigma_combinatorics: t in 1..4");
    SigmaCombinatorics out{};
    out.t = t;
    // F(z; x, y) root sets via the A-value table
    LocalCounts tab = local_count_table(s, p);
    // roots of A(z) = value for each value: collect lists
    std::vector<std::vector<i64>> roots_for_value((size_t)p);
    for (i64 z = 0; z < p; ++z)
        roots_for_value[(size_t)eval_mod(s.A, z, p)].push_back(z);
    i64 scale = mod_reduce(s.scale, p);
    i64 kk = mod_reduce(s.inst.k, p);
    // P(z1, z2, 1) as a bivariate for the pairwise condition
    MPoly P2 = substitute_value(s.P, 2, 1);
    auto pcond = [&](i64 u, i64 w2) {
        if (u == w2) return true;
        std::vector<i64> pt{u, w2, 1};
        return eval_mod(P2, pt, p) == 0;
    };
    std::vector<MPoly> cols = collect(s.inst.f, 1);
    std::vector<Poly1> colp;
    for (auto& c : cols) colp.push_back(to_poly1(c, 0));
    for (i64 x = 0; x < p; ++x) {
        std::vector<i64> cx(colp.size());
        for (size_t i = 0; i < colp.size(); ++i) cx[i] = eval_mod(colp[i], x, p);
        for (i64 y = 0; y < p; ++y) {
            i64 fv = 0;
            for (size_t i = colp.size(); i-- > 0;) fv = (fv * y + cx[i]) % p;
            i64 val = mod_reduce(scale * mod_reduce(fv - kk + p, p), p);
            const auto& K_roots = roots_for_value[(size_t)val];
            if (K_roots.empty()) continue;
            // enumerate z-tuples over F_p^t with K(z1)=0 and pairwise condition,
            // classified by the number of distinct values
            std::vector<i64> z((size_t)t);
            std::function<void(int)> rec = [&](int pos) {
                if (pos == t) {
                    std::vector<i64> distinct;
                    for (i64 zz : z)
                        if (std::find(distinct.begin(), distinct.end(), zz) == distinct.end())
                            distinct.push_back(zz);
                    out.tuples_sigma[distinct.size()] += 1;
                    return;
                }
                for (i64 cand = 0; cand < p; ++cand) {
                    bool ok = true;
                    for (int u = 0; u < pos; ++u)
                        if (!pcond(z[(size_t)u], cand)) { ok = false; break; }
                    if (!ok) continue;
                    z[(size_t)pos] = cand;
                    rec(pos + 1);
                }
            };
            for (i64 z1 : K_roots) {
                z[0] = z1;
                rec(1);
            }
            // base systems: ordered tuples of distinct values (u1.., us) with
            // K(u1) = 0 and the pairwise condition
            for (i64 u1 : K_roots) {
                out.bases_sigma[1] += 1;
                for (i64 u2 = 0; u2 < p; ++u2) {
                    if (u2 == u1 || !pcond(u1, u2)) continue;
                    out.bases_sigma[2] += 1;
                    if (t < 3) continue;
                    for (i64 u3 = 0; u3 < p; ++u3) {
                        if (u3 == u1 || u3 == u2) continue;
                        if (!pcond(u1, u3) || !pcond(u2, u3)) continue;
                        out.bases_sigma[3] += 1;
                        if (t < 4) continue;
                        for (i64 u4 = 0; u4 < p; ++u4) {
                            if (u4 == u1 || u4 == u2 || u4 == u3) continue;
                            if (!pcond(u1, u4) || !pcond(u2, u4) || !pcond(u3, u4)) continue;
                            out.bases_sigma[4] += 1;
                        }
                    }
                }
            }
        }
    }
    for (int sdx = 1; sdx <= t; ++sdx) {
        if (out.bases_sigma[sdx] != 0 &&
            mpz_divisible_p(out.tuples_sigma[sdx].get_mpz_t(), out.bases_sigma[sdx].get_mpz_t()))
            out.multiplicity[sdx] = mpz_class(out.tuples_sigma[sdx] / out.bases_sigma[sdx]).get_si();
    }
    return out;
}

} // namespace aet

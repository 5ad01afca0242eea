#include "aet/congruence.hpp"

#include <cmath>

namespace aet {

namespace {

// p-adic valuation of the content of Q, capped at `cap`.
int content_valuation(const Poly1& Q, i64 p, int cap) {
    int v = cap;
    for (const auto& c : Q.coeff) {
        if (c == 0) continue;
        int w = 0;
        mpz_class t = c;
        while (w < v && mpz_divisible_ui_p(t.get_mpz_t(), p)) {
            t /= (long)p;
            ++w;
        }
        v = std::min(v, w);
        if (v == 0) break;
    }
    return v;
}

Poly1 divide_content_power(const Poly1& Q, i64 p, int c) {
    Poly1 r = Q;
    mpz_class pc;
    mpz_ui_pow_ui(pc.get_mpz_t(), p, c);
    for (auto& x : r.coeff) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), pc.get_mpz_t());
    return r;
}

mpz_class pow_p(i64 p, int e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

struct HenselCtx {
    i64 p;
    const Budget& budget;
    u64 nodes = 0;
};

// Count roots of Q mod p^l (l >= 0). Q arbitrary.
mpz_class hensel_count(HenselCtx& ctx, const Poly1& Q, int l) {
    if (l == 0) return 1;
    if (++ctx.nodes > ctx.budget.max_items)
        throw budget_error("hensel tree exceeds node budget");
    const i64 p = ctx.p;
    if (Q.is_zero()) return pow_p(p, l);
    int c = content_valuation(Q, p, l);
    if (c >= l) return pow_p(p, l);
    const Poly1 R = c > 0 ? divide_content_power(Q, p, c) : Q;
    const int m = l - c;   // roots of R mod p^m, then multiply by p^c lifts
    // roots of R mod p
    mpz_class total = 0;
    Poly1 Rp = derivative(R);
    for (i64 r = 0; r < p; ++r) {
        if (eval_mod(R, r, p) != 0) continue;
        if (m == 1) {
            total += 1;
            continue;
        }
        if (eval_mod(Rp, r, p) != 0) {
            total += 1;   // unique Hensel lift through every level
        } else {
            // branch: x = r + p y with y mod p^{m-1}, R(r + p y) = 0 mod p^m.
            // The shifted polynomial has content divisible by p.
            Poly1 shifted = compose_linear(R, mpz_class((long)p), mpz_class((long)r));
            int c2 = content_valuation(shifted, p, m);
            if (c2 >= m) {
                total += pow_p(p, m - 1);
            } else {
                Poly1 T = divide_content_power(shifted, p, c2);
                total += pow_p(p, c2 - 1) * hensel_count(ctx, T, m - c2);
            }
        }
    }
    return total * pow_p(p, c);
}

} // namespace

mpz_class count_roots_mod_prime_power(const CongruenceQuery& q, const Budget& budget) {
    if (!is_prime_u64((u64)q.p)) throw invariant_error("count_roots: p must be prime");
    if (q.l < 1) throw invariant_error("count_roots: l >= 1 required");
    HenselCtx ctx{q.p, budget, 0};
    return hensel_count(ctx, q.Q, q.l);
}

mpz_class count_linear_congruence(const mpz_class& A, const mpz_class& B,
                                  i64 p, int l, int m) {
    if (A == 0 || mpz_divisible_ui_p(A.get_mpz_t(), p))
        throw invariant_error("count_linear_congruence: p | A");
    if (m <= 0) return pow_p(p, l);
    if (m <= l) return pow_p(p, l - m);
    // m > l: at most the single representative x0 = -B/A mod p^m can qualify,
    // and it does iff x0 < p^l.
    mpz_class pm = pow_p(p, m);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), A.get_mpz_t(), pm.get_mpz_t()) == 0)
        throw invariant_error("count_linear_congruence: A not invertible");
    mpz_class x0 = (-B * inv) % pm;
    if (x0 < 0) x0 += pm;
    return x0 < pow_p(p, l) ? 1 : 0;
}

const char* delta_case_name(DeltaCase c) {
    switch (c) {
        case DeltaCase::LeadingForm: return "leading-form";
        case DeltaCase::PartialDerivative: return "partial-derivative";
        case DeltaCase::EJNumerator: return "E_J-numerator";
        case DeltaCase::E0MinusK: return "E0-minus-k";
    }
    return "?";
}

namespace {

mpz_class mpz_pow_int(const mpz_class& b, unsigned e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpz_class factorial_z(int n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

} // namespace

DeltaCertificate delta_f(const MPoly& f_in, const mpz_class& k,
                         const mpz_class& M_in, const mpz_class& N_in) {
    if (M_in == 0 && N_in == 0)
        throw invariant_error("delta_f: (M,N) must not both vanish");
    DeltaCertificate cert{};
    MPoly f = f_in;
    mpz_class M = M_in, N = N_in;
    if (N == 0) {
        // mirrored case analysis with the variable roles exchanged
        cert.swapped = true;
        MPoly g(f.vars);
        for (const auto& [e, c] : f.terms) {
            MPoly::Exp e2 = e;
            std::swap(e2[0], e2[1]);
            g.terms[e2] = c;
        }
        f = g;
        std::swap(M, N);
    }
    const int d = f.total_degree();
    MPoly fd = homogeneous_part(f, d);
    std::vector<mpz_class> point{N, -M};

    mpz_class lead = eval(fd, point);
    mpz_class mx = abs(M) > abs(N) ? abs(M) : abs(N);
    mpz_class scale = (k == 0 ? mpz_class(1) : abs(k)) * mpz_pow_int(mx, d * d);
    if (lead != 0) {
        cert.kind = DeltaCase::LeadingForm;
        cert.value = lead;
        cert.bound_ratio = mpz_class(abs(cert.value)).get_d() / scale.get_d();
        return cert;
    }

    MPoly fd_y = derivative(fd, 1);
    mpz_class Dy = eval(fd_y, point);
    if (Dy == 0)
        throw invariant_error("delta_f: top form is singular at (N,-M)");

    // E_j = (1/N^j) sum_{i=j..d} (-f_{d-1}/Dy)^{i-j} / (i-j)! *
    //       (d^{i-j} f_i / dy^{i-j})(N,-M), exact over Q.
    MPoly fdm1 = homogeneous_part(f, d - 1);
    mpz_class F1 = eval(fdm1, point);
    std::vector<mpq_class> E(d + 1, mpq_class(0));
    cert.A.assign(d + 1, mpz_class(0));
    cert.B.assign(d + 1, mpz_class(0));
    for (int j = 0; j <= d; ++j) {
        mpq_class acc = 0;
        for (int i = j; i <= d; ++i) {
            MPoly g = homogeneous_part(f, i);
            for (int t = 0; t < i - j; ++t) g = derivative(g, 1);
            mpz_class gv = eval(g, point);
            if (gv == 0) continue;
            mpq_class term(gv);
            term /= factorial_z(i - j);
            mpq_class ratio(-F1, Dy);
            ratio.canonicalize();
            for (int t = 0; t < i - j; ++t) term *= ratio;
            acc += term;
        }
        mpq_class nj(mpz_pow_int(N, j));
        E[j] = acc / nj;
        // clear to the integer pair (A_j, B_j)
        mpz_class Bj = mpz_pow_int(N, j) * mpz_pow_int(Dy, d - j) * factorial_z(d - j);
        mpq_class Aj = E[j] * mpq_class(Bj);
        if (Aj.get_den() != 1)
            throw invariant_error("delta_f: A_j failed to clear to an integer");
        cert.A[j] = Aj.get_num();
        cert.B[j] = Bj;
    }

    int J = -1;
    for (int j = d - 1; j >= 1; --j)
        if (E[j] != 0) { J = j; break; }

    if (J >= 1) {
        cert.kind = DeltaCase::EJNumerator;
        cert.J = J;
        cert.value = Dy * cert.A[J];
    } else {
        if (E[0] == mpq_class(k))
            throw invariant_error("delta_f: rational line in the curve (precondition)");
        cert.kind = DeltaCase::E0MinusK;
        cert.value = Dy * (cert.A[0] - k * cert.B[0]);
    }
    if (cert.value == 0) throw invariant_error("delta_f: zero certificate");
    cert.bound_ratio = mpz_class(abs(cert.value)).get_d() / scale.get_d();
    return cert;
}

PhiPartialSum phi_partial_sum(const std::function<double(i64)>& phi_abs_at_h,
                              const mpz_class& delta_value, int d, i64 H, double eps) {
    if (H < 1) throw invariant_error("phi_partial_sum: H >= 1 required");
    PhiPartialSum out;
    KahanSum acc;
    double expo = 2.0 - 1.0 / d + eps;
    for (i64 h = 1; h <= H; ++h) {
        double term = phi_abs_at_h(h) / std::pow((double)h, expo);
        acc.add(2.0 * term);   // h and -h contribute equally
        out.terms += 2;
    }
    out.value = acc.value();
    out.comparison = std::pow(mpz_class(abs(delta_value)).get_d(), eps) * std::pow((double)H, eps);
    return out;
}

} // namespace aet

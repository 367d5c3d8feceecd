#include "pfaff/brieskorn_petrov.hpp"

#include <algorithm>

namespace pfaff {

namespace {

Rat factorial(long k) {
    Rat f = 1;
    for (long i = 2; i <= k; i++) f *= i;
    return f;
}

Rat rat_pow(const Rat& base, long e) {
    Rat r = 1;
    for (long i = 0; i < e; i++) r *= base;
    return r;
}

}  // namespace

EulerDivision euler_divide(const KForm& eta, const Poly& f, const WeightSystem& w,
                           EulerVariant variant) {
    const CtxPtr& ctx = eta.ctx();
    const int n = w.n;
    if (n < 2) fail(errc::invalid_argument, "euler_divide requires n >= 2");
    if (!eta.is_zero() && eta.k() != n - 1)
        fail(errc::invalid_argument, "euler_divide expects an (n-1)-form");
    Poly fl = f.lift(ctx);
    Rat r = w.r != 0 ? w.r : *weighted_degree(f, w);

    EulerDivision out;
    out.variant = variant;
    if (eta.is_zero()) {
        out.main = KForm::zero(ctx, variant == EulerVariant::Multiple ? n : n - 1);
        out.xi = KForm::zero(ctx, n - 2);
        out.checked = true;
        return out;
    }

    KForm df = ext_d(KForm::from_poly(fl));
    KForm deta = ext_d(eta);

    if (variant == EulerVariant::Multiple) {
        KForm mu = deta.is_zero() ? KForm::zero(ctx, n)
                                  : invert_euler(deta, w, EulerInverse::plain).mul_rat(r);
        KForm residue = eta;
        if (!mu.is_zero())
            residue = residue - euler_apply(mu, w, EulerOp::interior).mul_rat(Rat(1) / r);
        if (!ext_d(residue).is_zero())
            fail(errc::internal_error, "euler_divide residue is not closed");
        KForm xi = residue.is_zero() ? KForm::zero(ctx, n - 2) : primitive(residue, w);
        out.main = mu;
        out.xi = xi;
        // df^eta = f*mu + df^d(xi)
        KForm lhs = wedge(df, eta);
        KForm rhs = mu.mul_poly(fl) + wedge(df, ext_d(xi));
        if (lhs != rhs) fail(errc::internal_error, "euler_divide (multiple) reconstruction failed");
        out.checked = true;
        return out;
    }

    KForm nu = deta.is_zero() ? KForm::zero(ctx, n)
                              : invert_euler(deta, w, EulerInverse::shifted, r);
    KForm omega = nu.is_zero() ? KForm::zero(ctx, n - 1) : primitive(nu, w);
    KForm residue = eta - omega;
    if (!nu.is_zero())
        residue = residue - euler_apply(nu, w, EulerOp::interior).mul_rat(Rat(1) / r);
    if (!ext_d(residue).is_zero())
        fail(errc::internal_error, "euler_divide residue is not closed");
    KForm xi = residue.is_zero() ? KForm::zero(ctx, n - 2) : primitive(residue, w);
    out.main = omega;
    out.xi = xi;
    // df^eta = d(f*omega) + df^d(xi)
    KForm lhs = wedge(df, eta);
    KForm rhs = ext_d(omega.mul_poly(fl)) + wedge(df, ext_d(xi));
    if (lhs != rhs) fail(errc::internal_error, "euler_divide (derivative) reconstruction failed");
    out.checked = true;
    return out;
}

// ---------------------------------------------------------------------------
// Petrov / Brieskorn recursions

namespace {

struct PetrovRec {
    std::vector<Poly> p;  // xlF
    KForm xi, xi_prime;   // xl
    int depth = 0;
};

struct BrieskornRec {
    std::vector<Poly> q;
    KForm zeta;
    int depth = 0;
};

struct Decomposer {
    const FamilySpec& fam;
    const CtxPtr& xl;
    const CtxPtr& xlF;
    Poly f_xl;
    KForm df;
    std::vector<KForm> omegas;
    std::vector<KForm> mus;
    Poly F_xl;

    explicit Decomposer(const FamilySpec& family)
        : fam(family), xl(family.xl), xlF(family.xlF) {
        f_xl = family.f;
        df = ext_d(KForm::from_poly(f_xl));
        for (int i = 0; i < family.l(); i++) {
            mus.push_back(family.mu(i));
            omegas.push_back(family.omega(i));
        }
        F_xl = family.F;
    }

    std::optional<Rat> max_x_degree(const KForm& a) const { return x_degree(a, fam.w()); }

    PetrovRec petrov(const KForm& omega, int guard) const {
        PetrovRec out;
        out.p.assign(fam.l(), Poly::zero(xlF));
        out.xi = KForm::zero(xl, fam.n() - 2);
        out.xi_prime = KForm::zero(xl, fam.n() - 2);
        if (omega.is_zero()) return out;
        if (guard > 512) fail(errc::internal_error, "petrov recursion exceeded depth guard");

        DivisionOutcome div = divide_by_df(ext_d(omega), fam.la);
        KForm remainder_sum = KForm::zero(xl, fam.n() - 1);
        for (int i = 0; i < fam.l(); i++)
            remainder_sum = remainder_sum + omegas[i].mul_poly(div.c[i]);

        if (div.eta.is_zero()) {
            // residue is closed: a primitive finishes the decomposition
            KForm residue = omega - remainder_sum;
            if (!ext_d(residue).is_zero())
                fail(errc::internal_error, "petrov base residue is not closed");
            out.xi_prime = residue.is_zero() ? KForm::zero(xl, fam.n() - 2)
                                             : primitive(residue, fam.w());
            for (int i = 0; i < fam.l(); i++) out.p[i] = div.c[i].lift(xlF);
            out.depth = 1;
            return out;
        }

        EulerDivision ed = euler_divide(div.eta, f_xl, fam.w(), EulerVariant::Derivative);
        const KForm& omega1 = ed.main;  // omega'
        KForm xi_a = -ed.xi;
        // rho := omega - sum c_i omega_i - f*omega' + df^ed.xi  is closed
        KForm rho = omega - remainder_sum - omega1.mul_poly(f_xl) + wedge(df, ed.xi);
        if (!ext_d(rho).is_zero())
            fail(errc::internal_error, "petrov step residue is not closed");
        KForm xi_b = rho.is_zero() ? KForm::zero(xl, fam.n() - 2) : primitive(rho, fam.w());

        // omega = sum c_i omega_i + F omega' + dF^xi_a + d(xi_b) - omega''
        KForm omega2 = omega1.mul_poly(fam.h) + wedge(fam.dh, xi_a);

        auto xd_in = max_x_degree(omega);
        auto xd1 = max_x_degree(omega1);
        auto xd2 = max_x_degree(omega2);
        if ((xd1 && xd_in && *xd1 >= *xd_in) || (xd2 && xd_in && *xd2 >= *xd_in))
            fail(errc::internal_error, "petrov recursion did not reduce the x-degree");

        PetrovRec rec1 = petrov(omega1, guard + 1);
        PetrovRec rec2 = petrov(omega2, guard + 1);

        Poly Fv = Poly::variable(xlF, xlF->F_index());
        for (int i = 0; i < fam.l(); i++)
            out.p[i] = div.c[i].lift(xlF) + Fv * rec1.p[i] - rec2.p[i];
        // F*(dF^xi_p) = dF^(F xi_p);  F*d(xi_p') = d(F xi_p') - dF^xi_p'
        out.xi = xi_a + rec1.xi.mul_poly(F_xl) - rec1.xi_prime - rec2.xi;
        out.xi_prime = xi_b + rec1.xi_prime.mul_poly(F_xl) - rec2.xi_prime;
        out.depth = 1 + std::max(rec1.depth, rec2.depth);
        return out;
    }

    BrieskornRec brieskorn(const KForm& mu, int guard) const {
        BrieskornRec out;
        out.q.assign(fam.l(), Poly::zero(xlF));
        out.zeta = KForm::zero(xl, fam.n() - 2);
        if (mu.is_zero()) return out;
        if (guard > 512) fail(errc::internal_error, "brieskorn recursion exceeded depth guard");

        DivisionOutcome div = divide_by_df(mu, fam.la);
        if (div.eta.is_zero()) {
            for (int i = 0; i < fam.l(); i++) out.q[i] = div.c[i].lift(xlF);
            out.depth = 1;
            return out;
        }

        EulerDivision ed = euler_divide(div.eta, f_xl, fam.w(), EulerVariant::Multiple);
        const KForm& mu1 = ed.main;  // mu'
        // mu = sum c mu_i + F mu' + dF^d(xi) - mu'',  mu'' = h mu' + dh^d(xi)
        KForm mu2 = mu1.mul_poly(fam.h) + wedge(fam.dh, ext_d(ed.xi));

        auto xd_in = max_x_degree(mu);
        auto xd1 = max_x_degree(mu1);
        auto xd2 = max_x_degree(mu2);
        if ((xd1 && xd_in && *xd1 >= *xd_in) || (xd2 && xd_in && *xd2 >= *xd_in))
            fail(errc::internal_error, "brieskorn recursion did not reduce the x-degree");

        BrieskornRec rec1 = brieskorn(mu1, guard + 1);
        BrieskornRec rec2 = brieskorn(mu2, guard + 1);

        Poly Fv = Poly::variable(xlF, xlF->F_index());
        for (int i = 0; i < fam.l(); i++)
            out.q[i] = div.c[i].lift(xlF) + Fv * rec1.q[i] - rec2.q[i];
        // F*(dF^d zeta) = dF^d(F zeta)
        out.zeta = ed.xi + rec1.zeta.mul_poly(F_xl) - rec2.zeta;
        out.depth = 1 + std::max(rec1.depth, rec2.depth);
        return out;
    }
};

void record_degree(AuditInfo& audit, const std::string& what, const KForm& form,
                   const WeightSystem& w, const std::optional<Rat>& expected) {
    DegreeCheck chk;
    chk.what = what;
    if (form.is_zero()) {
        chk.homogeneous = true;
        chk.actual = "zero";
        chk.ok = true;
    } else {
        chk.homogeneous = is_quasihomogeneous(form, w);
        auto d = weighted_degree(form, w);
        chk.actual = d ? rat_str(*d) : "undefined";
        chk.ok = chk.homogeneous && (!expected || (d && *d == *expected));
    }
    if (expected) chk.expected = rat_str(*expected);
    audit.degrees.push_back(chk);
    audit.degrees_ok = audit.degrees_ok && chk.ok;
}

void record_poly_degree(AuditInfo& audit, const std::string& what, const Poly& p,
                        const WeightSystem& w, const std::optional<Rat>& expected) {
    DegreeCheck chk;
    chk.what = what;
    if (p.is_zero()) {
        chk.homogeneous = true;
        chk.actual = "zero";
        chk.ok = true;
    } else {
        chk.homogeneous = is_quasihomogeneous(p, w);
        auto d = weighted_degree(p, w);
        chk.actual = d ? rat_str(*d) : "undefined";
        chk.ok = chk.homogeneous && (!expected || (d && *d == *expected));
    }
    if (expected) chk.expected = rat_str(*expected);
    audit.degrees.push_back(chk);
    audit.degrees_ok = audit.degrees_ok && chk.ok;
}

}  // namespace

PetrovDecomposition petrov_decompose(const KForm& omega_in, const FamilySpec& family) {
    if (family.n() < 2) fail(errc::invalid_argument, "decomposition requires n >= 2");
    Decomposer dec(family);
    KForm omega = (*omega_in.ctx() == *family.xl) ? omega_in : omega_in.lift(family.xl);
    if (!omega.is_zero() && omega.k() != family.n() - 1)
        fail(errc::invalid_argument, "petrov_decompose expects an (n-1)-form");

    PetrovDecomposition out;
    out.p.assign(family.l(), Poly::zero(family.xlF));
    out.xi = KForm::zero(family.xl, family.n() - 2);
    out.xi_prime = KForm::zero(family.xl, family.n() - 2);

    for (const auto& [d, comp] : degree_components(omega, family.w())) {
        (void)d;
        PetrovRec rec = dec.petrov(comp, 0);
        for (int i = 0; i < family.l(); i++) out.p[i] += rec.p[i];
        out.xi = out.xi + rec.xi;
        out.xi_prime = out.xi_prime + rec.xi_prime;
        out.audit.depth = std::max(out.audit.depth, rec.depth);
    }

    // exact reconstruction with F substituted
    KForm rhs = wedge(family.dF, out.xi) + ext_d(out.xi_prime);
    for (int i = 0; i < family.l(); i++)
        rhs = rhs + dec.omegas[i].mul_poly(family.subst_F(out.p[i]));
    if (rhs != omega) fail(errc::internal_error, "petrov decomposition failed to reconstruct");
    out.audit.input_norm = norm(omega, NormMode::parametric);
    for (const Poly& pi : out.p) out.audit.sum_p_norm += norm(pi, NormMode::parametric);
    return out;
}

BrieskornDecomposition brieskorn_decompose(const KForm& mu_in, const FamilySpec& family) {
    if (family.n() < 2) fail(errc::invalid_argument, "decomposition requires n >= 2");
    Decomposer dec(family);
    KForm mu = (*mu_in.ctx() == *family.xl) ? mu_in : mu_in.lift(family.xl);
    if (!mu.is_zero() && mu.k() != family.n())
        fail(errc::invalid_argument, "brieskorn_decompose expects an n-form");

    BrieskornDecomposition out;
    out.q.assign(family.l(), Poly::zero(family.xlF));
    out.zeta = KForm::zero(family.xl, family.n() - 2);

    for (const auto& [d, comp] : degree_components(mu, family.w())) {
        (void)d;
        BrieskornRec rec = dec.brieskorn(comp, 0);
        for (int i = 0; i < family.l(); i++) out.q[i] += rec.q[i];
        out.zeta = out.zeta + rec.zeta;
        out.audit.depth = std::max(out.audit.depth, rec.depth);
    }

    KForm rhs = wedge(family.dF, ext_d(out.zeta));
    for (int i = 0; i < family.l(); i++)
        rhs = rhs + dec.mus[i].mul_poly(family.subst_F(out.q[i]));
    if (rhs != mu) fail(errc::internal_error, "brieskorn decomposition failed to reconstruct");
    out.audit.input_norm = norm(mu, NormMode::parametric);
    for (const Poly& qi : out.q) out.audit.sum_p_norm += norm(qi, NormMode::parametric);
    return out;
}

AuditInfo audit_bounds(const PetrovDecomposition& dec, const KForm& omega_in,
                       const FamilySpec& family, const ModulusEstimate& modulus) {
    AuditInfo audit = dec.audit;
    audit.degrees.clear();
    audit.degrees_ok = true;

    KForm omega = (*omega_in.ctx() == *family.xl) ? omega_in : omega_in.lift(family.xl);
    const WeightSystem& w = family.w();
    const Rat r = family.r();

    bool quasi = is_quasihomogeneous(omega, w);
    std::optional<Rat> k = omega.is_zero() ? std::nullopt : weighted_degree(omega, w);

    if (quasi && k) {
        for (int i = 0; i < family.l(); i++) {
            Rat deg_omega_i = family.la.basis_deg[i] + family.n();
            record_poly_degree(audit, "p_" + std::to_string(i + 1), dec.p[i], w,
                               *k - deg_omega_i);
        }
        record_degree(audit, "xi", dec.xi, w, *k - r);
        record_degree(audit, "xi_prime", dec.xi_prime, w, *k);
    }

    audit.input_norm = norm(omega, NormMode::parametric);
    audit.sum_p_norm = 0;
    for (const Poly& pi : dec.p) audit.sum_p_norm += norm(pi, NormMode::parametric);

    audit.bound_applicable = false;
    if (w.is_symmetric() && quasi && k && boost::multiprecision::denominator(*k) == 1 &&
        *k >= 1) {
        long kk = k->convert_to<long>();
        audit.bound_applicable = true;
        audit.bound = factorial(kk) * rat_pow(r, kk * (family.n() + 3)) *
                      rat_pow(modulus.M_hat, kk) * audit.input_norm;
        audit.bound_ok = audit.sum_p_norm <= audit.bound;
    }
    return audit;
}

}  // namespace pfaff

#include "pfaff/division.hpp"

#include <algorithm>

namespace pfaff {

namespace {

/// Split an exponent vector of a parameter-carrying context into the x-part
/// and the parameter part.
void split_exp(const VarContext& ctx, const Expv& e, Expv& x_part, Expv& par_part) {
    x_part = Expv{};
    par_part = Expv{};
    for (int v = 0; v < ctx.nx; v++) x_part[v] = e[v];
    for (int v = ctx.nx; v < ctx.vars(); v++) par_part[v] = e[v];
}

}  // namespace

DivisionOutcome divide_by_df(const KForm& mu, const LocalAlgebra& la) {
    const CtxPtr& ctx = mu.ctx();
    const int n = la.n();
    if (mu.k() != n) fail(errc::invalid_argument, "divide_by_df expects an n-form");
    if (ctx->nx != n) fail(errc::invalid_argument, "variable count mismatch");
    if (ctx->has_F) {
        for (const auto& [m, p] : mu.comps()) {
            (void)m;
            if (p.depends_on(ctx->F_index()))
                fail(errc::invalid_argument, "divide_by_df input must not contain F");
        }
    }

    DivisionOutcome out;
    uint32_t full = (1u << n) - 1;
    std::vector<PolyBuilder> c_builders;
    c_builders.reserve(la.l);
    for (int i = 0; i < la.l; i++) c_builders.emplace_back(ctx);
    std::map<uint32_t, PolyBuilder> eta_builders;

    for (const auto& [m, p] : mu.comps()) {
        if (m != full) fail(errc::internal_error, "n-form with a non-volume component");
        for (const Term& t : p.terms()) {
            Expv x_part, par_part;
            split_exp(*ctx, t.exp, x_part, par_part);
            const LocalAlgebra::MonoDivision& div = la.divide_monomial(x_part);
            for (const auto& [i, ci] : div.c) c_builders[i].add(par_part, ci * t.c);
            for (const auto& [em, ep] : div.eta.comps()) {
                auto it = eta_builders.find(em);
                if (it == eta_builders.end()) it = eta_builders.emplace(em, PolyBuilder(ctx)).first;
                // lift the x-only eta coefficients and attach the parameter part
                for (const Term& et : ep.terms()) {
                    Expv e = par_part;
                    for (int v = 0; v < n; v++) e[v] = et.exp[v];
                    it->second.add(e, et.c * t.c);
                }
            }
        }
    }

    out.c.reserve(la.l);
    for (int i = 0; i < la.l; i++) out.c.push_back(c_builders[i].build());
    std::vector<std::pair<uint32_t, Poly>> eta_acc;
    for (auto& [m, b] : eta_builders) {
        Poly p = b.build();
        if (!p.is_zero()) eta_acc.emplace_back(m, std::move(p));
    }
    out.eta = KForm::make(ctx, n - 1, std::move(eta_acc));

    // exact reconstruction
    KForm rhs = wedge(ext_d(KForm::from_poly(la.f.lift(ctx))), out.eta);
    for (int i = 0; i < la.l; i++)
        rhs = rhs + KForm::volume(ctx).mul_poly(la.phi(i).lift(ctx) * out.c[i]);
    if (rhs != mu) fail(errc::internal_error, "division by df failed to reconstruct");
    out.checked = true;
    return out;
}

ModulusEstimate division_modulus(const LocalAlgebra& la) {
    ModulusEstimate est;
    est.threshold = la.Dstar + la.w.max_weight();
    est.df_norm = 0;
    for (int i = 0; i < la.n(); i++) est.df_norm += norm(la.f.derivative(i));

    const CtxPtr& ctx = la.ctx();
    Rat best = 0;
    KForm witness;

    // achievable polynomial degrees with form degree <= threshold
    std::vector<Rat> degrees{Rat(0)};
    {
        std::map<Rat, bool> seen{{Rat(0), true}};
        for (size_t head = 0; head < degrees.size(); head++)
            for (int i = 0; i < la.n(); i++) {
                Rat d = degrees[head] + la.w.w[i];
                if (d + la.n() <= est.threshold && !seen.count(d)) {
                    seen[d] = true;
                    degrees.push_back(d);
                }
            }
        std::sort(degrees.begin(), degrees.end());
    }

    for (const Rat& d : degrees) {
        for (const Expv& alpha : la.monomials_of_degree(d)) {
            const LocalAlgebra::MonoDivision& div = la.divide_monomial(alpha);
            Rat t = norm(div.eta);
            for (const auto& [i, ci] : div.c) {
                (void)i;
                t += rat_abs(ci);
            }
            if (t == 0) fail(errc::internal_error, "division produced an empty outcome");
            Rat distortion = std::max(t, Rat(1) / t);
            if (distortion > best) {
                best = distortion;
                witness = KForm::volume(ctx).mul_poly(Poly::monomial(ctx, alpha, 1));
            }
        }
    }
    est.M_hat = best;
    est.witness = witness;
    return est;
}

DivisionOutcome divide_by_dF(const KForm& mu, const FamilySpec& family) {
    const CtxPtr& ctx = family.xl;
    const int n = family.n();
    KForm input = (mu.ctx() == ctx || *mu.ctx() == *ctx) ? mu : mu.lift(ctx);
    KForm remaining = input;

    DivisionOutcome out;
    out.c.assign(family.l(), Poly::zero(ctx));
    out.eta = KForm::zero(ctx, n - 1);

    long guard = 0;
    while (!remaining.is_zero()) {
        if (++guard > 100000) fail(errc::internal_error, "divide_by_dF failed to terminate");
        DivisionOutcome step = divide_by_df(remaining, family.la);
        for (int i = 0; i < family.l(); i++) out.c[i] += step.c[i];
        out.eta = out.eta + step.eta;
        // df^eta = dF^eta - dh^eta, so the unprocessed tail is -dh^eta
        remaining = -wedge(family.dh, step.eta);
    }

    KForm rhs = wedge(family.dF, out.eta);
    for (int i = 0; i < family.l(); i++) rhs = rhs + family.mu(i).mul_poly(out.c[i]);
    if (rhs != input) fail(errc::internal_error, "division by dF failed to reconstruct");
    out.checked = true;
    return out;
}

}  // namespace pfaff

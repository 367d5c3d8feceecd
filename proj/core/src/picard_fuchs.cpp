#include "pfaff/picard_fuchs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

#include "pfaff/numeric_util.hpp"

namespace pfaff {

namespace {

/// lambda_1-leading coefficient of p (as a polynomial with l_1 removed).
Poly lc_lam1(const Poly& p, int v) {
    int d = p.degree_in(v);
    std::vector<Term> out;
    for (const Term& t : p.terms())
        if (t.exp[v] == d) {
            Term s = t;
            s.exp[v] = 0;
            out.push_back(s);
        }
    return Poly::from_terms(p.ctx(), std::move(out));
}

/// Pseudo-remainder in the variable v: lc(b)^(da-db+1) * a = q*b + rem.
Poly prem(const Poly& a, const Poly& b, int v) {
    int db = b.degree_in(v);
    Poly lcb = lc_lam1(b, v);
    Poly r = a;
    int e = a.degree_in(v) - db + 1;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        int dr = r.degree_in(v);
        Poly lcr = lc_lam1(r, v);
        Expv shift{};
        shift[v] = static_cast<uint8_t>(dr - db);
        r = r * lcb - b * lcr.mul_term(shift, 1);
        e--;
    }
    for (; e > 0; e--) r = r * lcb;
    return r;
}

}  // namespace

Poly squarefree_part_lam1(const Poly& D, const CtxPtr& lam) {
    const int v = lam->lam_index(0);
    int l = D.degree_in(v);
    if (l <= 1) return D;
    Poly A = D;
    Poly B = D.derivative(v);

    Poly g = Poly::constant(lam, 1);
    Poly h = Poly::constant(lam, 1);
    Poly gcd_cand = Poly::constant(lam, 1);
    while (true) {
        int delta = A.degree_in(v) - B.degree_in(v);
        Poly R = prem(A, B, v);
        if (R.is_zero()) {
            gcd_cand = B;
            break;
        }
        if (R.degree_in(v) == 0) {
            gcd_cand = Poly::constant(lam, 1);
            break;
        }
        A = B;
        Poly divisor = g * h.pow(unsigned(delta));
        auto q = R.divide_exact(divisor);
        if (!q) fail(errc::internal_error, "subresultant chain division was not exact");
        B = std::move(*q);
        g = lc_lam1(A, v);
        if (delta >= 1) {
            auto hq = g.pow(unsigned(delta)).divide_exact(h.pow(unsigned(delta - 1)));
            if (!hq) fail(errc::internal_error, "subresultant h-update was not exact");
            h = std::move(*hq);
        }
    }

    if (gcd_cand.degree_in(v) == 0) return D;
    // the primitive gcd is l_1-monic because it divides the l_1-monic D,
    // so the chain result factors as lc * (monic gcd)
    auto monic = gcd_cand.divide_exact(lc_lam1(gcd_cand, v));
    if (!monic) fail(errc::internal_error, "gcd normalization was not exact");
    auto g_part = D.divide_exact(*monic);
    if (!g_part) fail(errc::internal_error, "squarefree division was not exact");
    return *g_part;
}

// ---------------------------------------------------------------------------
// derivation

PfaffianSystem derive_pfaffian(const Poly& f, const WeightSystem& w,
                               const std::vector<int>& order) {
    return derive_pfaffian(make_family(f, w, order));
}

PfaffianSystem derive_pfaffian(const FamilySpec& family) {
    if (family.n() < 2) fail(errc::invalid_argument, "derivation requires n >= 2");
    PfaffianSystem sys;
    sys.family = family;
    const FamilySpec& fam = sys.family;
    const int l = fam.l();
    const int m = fam.m;
    const Rat r = fam.r();

    sys.lam = VarContext::make(0, fam.lam_weights, false);
    sys.modulus = division_modulus(fam.la);

    // F mu_i = dF^eta_i + sum_j c_ij mu_j, prepared so that no division ever
    // multiplies by the principal part itself: F mu_i = dF^eta'_i + mu'_i
    // with eta'_i = r^{-1} i_X mu_i and mu'_i = h mu_i - dh^eta'_i.
    MatPoly C0 = matpoly_zero(sys.lam, l, l);
    for (int i = 0; i < l; i++) {
        KForm mu_i = fam.mu(i);
        KForm eta_prime = euler_apply(mu_i, fam.w(), EulerOp::interior).mul_rat(Rat(1) / r);
        KForm mu_prime = mu_i.mul_poly(fam.h) - wedge(fam.dh, eta_prime);
        DivisionOutcome div = divide_by_dF(mu_prime, fam);
        sys.omega.push_back(fam.omega(i));
        sys.eta.push_back(eta_prime + div.eta);
        for (int j = 0; j < l; j++) C0[i][j] = div.c[j].lift(sys.lam);

        // the prepared identity: F mu_i = dF ^ eta_i + sum_j c_ij mu_j
        KForm lhs = mu_i.mul_poly(fam.F);
        KForm rhs = wedge(fam.dF, sys.eta[i]);
        for (int j = 0; j < l; j++) rhs = rhs + fam.mu(j).mul_poly(div.c[j]);
        if (lhs != rhs) fail(errc::internal_error, "prepared division identity failed");
    }
    sys.C.push_back(C0);

    for (int s = 0; s < m; s++) {
        MatPoly Cs = matpoly_zero(sys.lam, l, l);
        for (int i = 0; i < l; i++) {
            KForm omega_prime = (sys.omega[i] + sys.eta[i]).mul_poly(fam.f_s(s)).mul_rat(-1);
            PetrovDecomposition pd = petrov_decompose(omega_prime, fam);
            for (int j = 0; j < l; j++) {
                // free term at F = 0; the remaining terms are divisible by F
                // and integrate to zero over cycles on {F = 0}. The sign
                // makes d/dl_s (C_0 I) = C_s I hold (checked numerically).
                Poly free_term = pd.p[j].subst_var(fam.xlF->F_index(), Rat(0));
                Cs[i][j] = -free_term.lift(sys.lam);
            }
        }
        sys.C.push_back(Cs);
    }

    // structural invariants
    WeightSystem lamw;  // n = 0; degrees are carried by the context weights
    {
        Poly lam1 = Poly::variable(sys.lam, sys.lam->lam_index(0));
        for (int i = 0; i < l; i++)
            for (int j = 0; j < l; j++) {
                Poly cprime = sys.C[0][i][j];
                if (i == j) cprime -= lam1;
                if (m > 0 && cprime.depends_on(sys.lam->lam_index(0)))
                    fail(errc::internal_error, "C_0 - l_1*1 must not depend on l_1");
                if (!cprime.is_zero() && m > 0) {
                    if (!is_quasihomogeneous(sys.C[0][i][j], lamw))
                        fail(errc::internal_error, "C_0 entry is not quasihomogeneous");
                    Rat expect = r + fam.la.basis_deg[i] - fam.la.basis_deg[j];
                    if (*weighted_degree(sys.C[0][i][j], lamw) != expect)
                        fail(errc::internal_error, "C_0 entry has the wrong degree");
                }
            }
        for (int s = 0; s < m; s++)
            for (int i = 0; i < l; i++)
                for (int j = 0; j < l; j++) {
                    const Poly& e = sys.C[s + 1][i][j];
                    if (e.is_zero()) continue;
                    if (!is_quasihomogeneous(e, lamw))
                        fail(errc::internal_error, "C_s entry is not quasihomogeneous");
                    Rat expect = fam.fs_deg[s] + fam.la.basis_deg[i] - fam.la.basis_deg[j];
                    if (*weighted_degree(e, lamw) != expect)
                        fail(errc::internal_error, "C_s entry has the wrong degree");
                }
    }

    sys.detC0 = matpoly_det(sys.C[0]);
    if (m > 0) {
        const int v1 = sys.lam->lam_index(0);
        if (sys.detC0.degree_in(v1) != l)
            fail(errc::internal_error, "det C_0 must have l_1-degree l");
        Poly lead = lc_lam1(sys.detC0, v1);
        if (!(lead == Poly::constant(sys.lam, 1)))
            fail(errc::internal_error, "det C_0 must be monic in l_1");
        if (!is_quasihomogeneous(sys.detC0, lamw) ||
            *weighted_degree(sys.detC0, lamw) != Rat(l) * r)
            fail(errc::internal_error, "det C_0 must be quasihomogeneous of degree l*r");
    }
    return sys;
}

// ---------------------------------------------------------------------------
// hypergeometric restriction

HypergeometricRestriction restrict_hypergeometric(const PfaffianSystem& sys,
                                                  const std::vector<Rat>& lam_rest) {
    const int l = sys.l();
    const int m = sys.m();
    if (m < 1) fail(errc::invalid_argument, "restriction needs at least the free-term parameter");
    if (int(lam_rest.size()) != m - 1)
        fail(errc::invalid_argument, "expected values for l_2..l_m");

    HypergeometricRestriction out;
    const int v1 = sys.lam->lam_index(0);
    for (int i = 0; i < l; i++)
        for (int j = 0; j < l; j++)
            if (sys.C[1][i][j].depends_on(v1)) out.offending.emplace_back(i + 1, j + 1);
    if (!out.offending.empty()) {
        out.ok = false;
        return out;
    }

    auto specialize = [&](const Poly& p) -> Rat {
        Poly q = p;
        for (int s = 1; s < m; s++) q = q.subst_var(sys.lam->lam_index(s), lam_rest[s - 1]);
        if (!q.is_zero() && q.degree_in(v1) > 0)
            fail(errc::internal_error, "specialized entry still depends on l_1");
        return q.is_zero() ? Rat(0) : q.terms()[0].c;
    };

    Poly lam1 = Poly::variable(sys.lam, v1);
    out.A.assign(l, std::vector<Rat>(l, Rat(0)));
    out.B.assign(l, std::vector<Rat>(l, Rat(0)));
    for (int i = 0; i < l; i++)
        for (int j = 0; j < l; j++) {
            Poly cprime = sys.C[0][i][j];
            if (i == j) cprime -= lam1;
            out.A[i][j] = specialize(cprime);
            Poly b = sys.C[1][i][j];
            if (i == j) b -= Poly::constant(sys.lam, 1);
            out.B[i][j] = specialize(b);
        }
    out.ok = true;
    return out;
}

// ---------------------------------------------------------------------------
// spectrum

namespace {

using cd = std::complex<double>;

std::vector<cd> coeffs_in_x2(const Poly& p, int x1, int x2, const cd& a) {
    std::vector<cd> out(p.degree_in(x2) + 1, cd(0));
    for (const Term& t : p.terms()) {
        cd v = rat_double(t.c);
        for (int k = 0; k < t.exp[x1]; k++) v *= a;
        out[t.exp[x2]] += v;
    }
    while (out.size() > 1 && std::abs(out.back()) < 1e-13) out.pop_back();
    return out;
}

}  // namespace

SpectrumReport spectrum_check(const PfaffianSystem& sys, const std::vector<Rat>& lam_star) {
    SpectrumReport rep;
    const FamilySpec& fam = sys.family;
    if (fam.n() != 2) fail(errc::invalid_argument, "spectrum check supports n = 2 only");
    if (int(lam_star.size()) != fam.m)
        fail(errc::invalid_argument, "lambda specialization length mismatch");
    const int l = fam.l();

    // specialize F and its gradient
    CtxPtr xctx = fam.la.ctx();
    Poly Fstar = fam.F;
    for (int s = 0; s < fam.m; s++) Fstar = Fstar.subst_var(fam.xl->lam_index(s), lam_star[s]);
    Fstar = Fstar.lift(xctx);
    Poly P = Fstar.derivative(0);
    Poly Q = Fstar.derivative(1);

    // eliminate x2
    Poly R = Poly::zero(xctx);
    int dP = P.degree_in(1), dQ = Q.degree_in(1);
    if (P.is_zero() || Q.is_zero()) {
        rep.degenerate = true;
        rep.message = "gradient component vanishes identically";
        return rep;
    }
    if (dP == 0)
        R = P;
    else if (dQ == 0)
        R = Q;
    else {
        // Sylvester matrix of P, Q as polynomials in x2 over Q[x1]
        auto coeff_of = [&](const Poly& p, int j) {
            std::vector<Term> ts;
            for (const Term& t : p.terms())
                if (t.exp[1] == j) {
                    Term s = t;
                    s.exp[1] = 0;
                    ts.push_back(s);
                }
            return Poly::from_terms(xctx, std::move(ts));
        };
        int size = dP + dQ;
        MatPoly S = matpoly_zero(xctx, size, size);
        for (int row = 0; row < dQ; row++)
            for (int j = 0; j <= dP; j++) S[row][row + (dP - j)] = coeff_of(P, j);
        for (int row = 0; row < dP; row++)
            for (int j = 0; j <= dQ; j++) S[dQ + row][row + (dQ - j)] = coeff_of(Q, j);
        R = matpoly_det(S);
    }
    if (R.is_zero()) {
        rep.degenerate = true;
        rep.message = "resultant vanishes identically (non-isolated critical set)";
        return rep;
    }

    // numeric critical points
    std::vector<cd> rc(R.degree_in(0) + 1, cd(0));
    for (const Term& t : R.terms()) rc[t.exp[0]] += rat_double(t.c);
    std::vector<cd> x1_roots = poly_roots(rc);

    std::vector<std::array<cd, 2>> points;
    const double tol = 1e-7;
    auto scale = [&](const Poly& p, const cd& a, const cd& b) {
        double s = 1;
        for (const Term& t : p.terms()) {
            double v = std::abs(rat_double(t.c)) * std::pow(std::max(1.0, std::abs(a)), t.exp[0]) *
                       std::pow(std::max(1.0, std::abs(b)), t.exp[1]);
            s = std::max(s, v);
        }
        return s;
    };
    for (const cd& a : x1_roots) {
        std::vector<cd> x2_cands;
        std::vector<cd> qc = coeffs_in_x2(Q, 0, 1, a);
        if (qc.size() > 1)
            x2_cands = poly_roots(qc);
        else {
            std::vector<cd> pc = coeffs_in_x2(P, 0, 1, a);
            if (pc.size() > 1) x2_cands = poly_roots(pc);
        }
        for (const cd& b : x2_cands) {
            std::vector<cd> at = {a, b};
            if (std::abs(P.eval(at)) > tol * scale(P, a, b)) continue;
            if (std::abs(Q.eval(at)) > tol * scale(Q, a, b)) continue;
            bool dup = false;
            for (const auto& q : points)
                if (std::abs(q[0] - a) + std::abs(q[1] - b) < 1e-6) dup = true;
            if (!dup) points.push_back({a, b});
        }
    }
    rep.critical_points = points;
    for (const auto& pt : points)
        rep.critical_values.push_back(Fstar.eval({pt[0], pt[1]}));

    // eigenvalues of C_0(lam*)
    Eigen::MatrixXd C0d(l, l);
    std::vector<Rat> at_lam(lam_star);
    for (int i = 0; i < l; i++)
        for (int j = 0; j < l; j++) C0d(i, j) = rat_double(sys.C[0][i][j].eval_rat(at_lam));
    Eigen::EigenSolver<Eigen::MatrixXd> es(C0d);
    for (int i = 0; i < l; i++) rep.eigenvalues.push_back(es.eigenvalues()(i));

    if (int(points.size()) != l) {
        rep.degenerate = true;
        rep.message = points.empty() ? "no isolated critical points found"
                                     : "critical point count differs from l (degenerate)";
        // the quasihomogeneous specialization lam* = 0 collapses everything
        // to the origin; report the common critical value story
        bool all_zero = true;
        for (const Rat& v : lam_star)
            if (v != 0) all_zero = false;
        if (all_zero) rep.message = "degenerate specialization: all critical values 0";
        return rep;
    }
    // Morse check: distinct critical values
    for (size_t i = 0; i < rep.critical_values.size(); i++)
        for (size_t j = i + 1; j < rep.critical_values.size(); j++)
            if (std::abs(rep.critical_values[i] - rep.critical_values[j]) < 1e-9) {
                rep.degenerate = true;
                rep.message = "specialization is not Morse: repeated critical values";
            }

    // optimal matching of eigenvalues to critical values
    std::vector<int> perm(l);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = 1e300;
    do {
        double cost = 0;
        for (int i = 0; i < l; i++) cost += std::abs(rep.eigenvalues[perm[i]] - rep.critical_values[i]);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    double maxrel = 0;
    for (int i = 0; i < l; i++) {
        double d = std::abs(rep.eigenvalues[best[i]] - rep.critical_values[i]);
        maxrel = std::max(maxrel, d / std::max(1.0, std::abs(rep.critical_values[i])));
    }
    rep.max_rel_distance = maxrel;
    {
        std::vector<cd> reordered(l);
        for (int i = 0; i < l; i++) reordered[i] = rep.eigenvalues[best[i]];
        rep.eigenvalues = reordered;
    }

    // evaluation eigenvectors v_j = (phi_1(a_j), ..., phi_l(a_j))
    Eigen::MatrixXcd C0c = C0d.cast<cd>();
    for (int j = 0; j < l; j++) {
        Eigen::VectorXcd v(l);
        for (int i = 0; i < l; i++) {
            std::vector<cd> at = {points[j][0], points[j][1]};
            v(i) = fam.la.phi(i).eval(at);
        }
        double res = (C0c * v - rep.critical_values[j] * v).norm() / v.norm();
        rep.eigvec_residuals.push_back(res);
        rep.max_eigvec_residual = std::max(rep.max_eigvec_residual, res);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// logarithmic poles

LogPoleReport logpole_check(const PfaffianSystem& sys) {
    LogPoleReport rep;
    const int l = sys.l();
    const int m = sys.m();
    const Poly& D = sys.detC0;
    rep.g = squarefree_part_lam1(D, sys.lam);
    rep.det_squarefree = (rep.g == D);

    MatPoly adj = matpoly_adjugate(sys.C[0]);

    std::vector<MatPoly> N;
    for (int s = 0; s < m; s++) {
        MatPoly rhs = matpoly_sub(sys.C[s + 1], matpoly_derivative(sys.C[0], sys.lam->lam_index(s)));
        N.push_back(matpoly_mul(adj, rhs));
    }

    rep.logarithmic = true;
    // g * Omega polynomial: D | g * N_s entrywise (trivial when g = D)
    if (!rep.det_squarefree) {
        for (int s = 0; s < m; s++)
            for (int i = 0; i < l; i++)
                for (int j = 0; j < l; j++) {
                    rep.checked_divisibilities++;
                    if (!(rep.g * N[s][i][j]).divisible_by(D)) {
                        rep.logarithmic = false;
                        rep.failures.push_back("g*N_" + std::to_string(s + 1) + "[" +
                                               std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                               "]");
                    }
                }
    }
    // dg ^ Omega polynomial: D | (dg/dl_s N_t - dg/dl_t N_s) entrywise
    std::vector<Poly> dg;
    for (int s = 0; s < m; s++) dg.push_back(rep.g.derivative(sys.lam->lam_index(s)));
    for (int s = 0; s < m; s++)
        for (int t = s + 1; t < m; t++)
            for (int i = 0; i < l; i++)
                for (int j = 0; j < l; j++) {
                    rep.checked_divisibilities++;
                    Poly num = dg[s] * N[t][i][j] - dg[t] * N[s][i][j];
                    if (!num.divisible_by(D)) {
                        rep.logarithmic = false;
                        rep.failures.push_back("(dg_" + std::to_string(s + 1) + " N_" +
                                               std::to_string(t + 1) + " - dg_" +
                                               std::to_string(t + 1) + " N_" +
                                               std::to_string(s + 1) + ")[" + std::to_string(i + 1) +
                                               "," + std::to_string(j + 1) + "]");
                    }
                }
    return rep;
}

}  // namespace pfaff

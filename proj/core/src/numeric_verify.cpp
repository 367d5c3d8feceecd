#include "pfaff/numeric_verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "pfaff/numeric_util.hpp"

namespace pfaff {

using cd = std::complex<double>;

std::vector<cd> poly_roots(std::vector<cd> coeffs) {
    double scale = 0;
    for (const cd& c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0) return {};
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-14 * scale) coeffs.pop_back();
    const int n = int(coeffs.size()) - 1;
    if (n <= 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; i++) companion(i, i - 1) = 1;
    for (int i = 0; i < n; i++) companion(i, n - 1) = -coeffs[i] / coeffs[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
    std::vector<cd> roots;
    for (int i = 0; i < n; i++) roots.push_back(es.eigenvalues()(i));
    std::sort(roots.begin(), roots.end(), [](const cd& a, const cd& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence.
struct GaussRule {
    std::array<double, 16> x{}, w{};
    GaussRule() {
        const int n = 16;
        for (int i = 0; i < n / 2; i++) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0 = 0, p1 = 0;
            for (int it = 0; it < 100; it++) {
                p0 = 1;
                p1 = 0;
                for (int j = 0; j < n; j++) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
                }
                double dp = n * (t * p0 - p1) / (t * t - 1);
                double step = p0 / dp;
                t -= step;
                if (std::abs(step) < 1e-16) break;
            }
            p0 = 1;
            p1 = 0;
            for (int j = 0; j < n; j++) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1);
            x[i] = -t;
            x[n - 1 - i] = t;
            w[i] = w[n - 1 - i] = 2.0 / ((1 - t * t) * dp * dp);
        }
    }
};

const GaussRule& gauss16() {
    static GaussRule rule;
    return rule;
}

struct Univariate {
    std::vector<double> c;  // ascending
    double operator()(double x) const {
        double s = 0;
        for (size_t i = c.size(); i-- > 0;) s = s * x + c[i];
        return s;
    }
    Univariate derivative() const {
        Univariate d;
        for (size_t i = 1; i < c.size(); i++) d.c.push_back(c[i] * double(i));
        if (d.c.empty()) d.c.push_back(0);
        return d;
    }
};

/// Specialized hyperelliptic data: F(x, lam) = x2^2 + U(x1).
struct HyperData {
    Poly U_exact;  // x-only context
    Univariate U, dU;
};

HyperData specialize_hyper(const PfaffianSystem& sys, const std::vector<Rat>& lam) {
    const FamilySpec& fam = sys.family;
    if (fam.n() != 2) fail(errc::invalid_argument, "numeric verification supports n = 2 only");
    if (int(lam.size()) != fam.m) fail(errc::invalid_argument, "lambda value count mismatch");
    Poly Fs = fam.F;
    for (int s = 0; s < fam.m; s++) Fs = Fs.subst_var(fam.xl->lam_index(s), lam[s]);
    Poly Fx = Fs.lift(fam.la.ctx());

    HyperData hd;
    std::vector<Term> u_terms;
    for (const Term& t : Fx.terms()) {
        if (t.exp[1] == 0) {
            u_terms.push_back(t);
            continue;
        }
        if (t.exp[1] == 2 && t.exp[0] == 0 && t.c == 1) continue;  // the x2^2 head
        fail(errc::numeric_error,
             "specialization is not hyperelliptic: F must reduce to x2^2 + U(x1)");
    }
    hd.U_exact = Poly::from_terms(fam.la.ctx(), std::move(u_terms));
    hd.U.c.assign(hd.U_exact.degree_in(0) + 1, 0.0);
    for (const Term& t : hd.U_exact.terms()) hd.U.c[t.exp[0]] = rat_double(t.c);
    hd.dU = hd.U.derivative();
    return hd;
}

double newton_polish(const Univariate& U, const Univariate& dU, double x0) {
    double x = x0;
    for (int it = 0; it < 100; it++) {
        double fx = U(x);
        double dfx = dU(x);
        if (dfx == 0) break;
        double step = fx / dfx;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace

std::vector<std::pair<double, double>> find_ovals(const PfaffianSystem& sys,
                                                  const std::vector<Rat>& lam) {
    HyperData hd = specialize_hyper(sys, lam);
    std::vector<cd> coeffs;
    for (double v : hd.U.c) coeffs.push_back(v);
    double scale = 0;
    for (const cd& v : coeffs) scale = std::max(scale, std::abs(v));
    std::vector<double> roots;
    for (const cd& z : poly_roots(coeffs))
        if (std::abs(z.imag()) < 1e-8 * std::max(1.0, scale)) roots.push_back(z.real());
    std::sort(roots.begin(), roots.end());
    std::vector<double> uniq;
    for (double r0 : roots)
        if (uniq.empty() || std::abs(r0 - uniq.back()) > 1e-9 * std::max(1.0, std::abs(r0)))
            uniq.push_back(r0);

    std::vector<std::pair<double, double>> ovals;
    for (size_t i = 0; i + 1 < uniq.size(); i++) {
        double e1 = newton_polish(hd.U, hd.dU, uniq[i]);
        double e2 = newton_polish(hd.U, hd.dU, uniq[i + 1]);
        if (!(e1 < e2)) continue;
        double mid = 0.5 * (e1 + e2);
        if (hd.U(mid) >= 0) continue;
        if (std::abs(hd.dU(e1)) < 1e-10 || std::abs(hd.dU(e2)) < 1e-10) continue;  // not simple
        ovals.emplace_back(e1, e2);
    }
    return ovals;
}

CycleSpec make_cycle(const PfaffianSystem& sys, const std::vector<Rat>& lam, int oval_index,
                     int orientation) {
    auto ovals = find_ovals(sys, lam);
    if (oval_index < 0 || oval_index >= int(ovals.size()))
        fail(errc::numeric_error, "no real oval at the requested specialization/index");
    CycleSpec cyc;
    cyc.lam = lam;
    cyc.e1 = ovals[oval_index].first;
    cyc.e2 = ovals[oval_index].second;
    cyc.orientation = orientation >= 0 ? +1 : -1;
    return cyc;
}

namespace {

/// Evaluator for one generator form: omega_i = A(x1,x2) dx1 + B(x1,x2) dx2
/// with double coefficients after specialization.
struct FormEval {
    // terms as (coef, e1, e2) per component
    std::vector<std::array<double, 3>> a, b;
    double eval_a(double x1, double x2) const { return eval(a, x1, x2); }
    double eval_b(double x1, double x2) const { return eval(b, x1, x2); }
    static double eval(const std::vector<std::array<double, 3>>& ts, double x1, double x2) {
        double s = 0;
        for (const auto& t : ts) s += t[0] * std::pow(x1, t[1]) * std::pow(x2, t[2]);
        return s;
    }
};

std::vector<FormEval> specialize_forms(const PfaffianSystem& sys, const std::vector<Rat>& lam) {
    std::vector<FormEval> out;
    for (int i = 0; i < sys.l(); i++) {
        KForm om = sys.omega[i].subst_lambda(lam);
        FormEval fe;
        for (const auto& [m, p] : om.comps()) {
            auto& target = (m == 1u) ? fe.a : fe.b;  // mask 1 = dx1, mask 2 = dx2
            for (const Term& t : p.terms())
                target.push_back({rat_double(t.c), double(t.exp[0]), double(t.exp[1])});
        }
        out.push_back(std::move(fe));
    }
    return out;
}

std::vector<double> integrate_oval(const std::vector<FormEval>& forms, const HyperData& hd,
                                   double e1, double e2, int orientation, double tol,
                                   double* quad_err) {
    const int l = int(forms.size());
    const GaussRule& rule = gauss16();
    const double c = 0.5 * (e1 + e2), rho = 0.5 * (e2 - e1);

    auto sweep_k = [&](int k) {
        std::vector<double> I(l, 0.0);
        const long panels = 1L << k;
        for (int branch = 0; branch < 2; branch++) {
            const double th0 = branch == 0 ? 0 : M_PI;
            const double sigma = branch == 0 ? 1.0 : -1.0;
            for (long p = 0; p < panels; p++) {
                double a = th0 + M_PI * double(p) / double(panels);
                double b = th0 + M_PI * double(p + 1) / double(panels);
                double half = 0.5 * (b - a), mid = 0.5 * (a + b);
                for (int q = 0; q < 16; q++) {
                    double th = mid + half * rule.x[q];
                    double x1 = c + rho * std::cos(th);
                    double mU = -hd.U(x1);
                    if (mU < 0) mU = 0;
                    double x2 = sigma * std::sqrt(mU);
                    double dx1 = -rho * std::sin(th);
                    double dx2 = x2 == 0 ? 0 : -hd.dU(x1) * dx1 / (2 * x2);
                    double wq = rule.w[q] * half;
                    for (int i = 0; i < l; i++)
                        I[i] += wq * (forms[i].eval_a(x1, x2) * dx1 +
                                      forms[i].eval_b(x1, x2) * dx2);
                }
            }
        }
        if (orientation < 0)
            for (double& v : I) v = -v;
        return I;
    };

    std::vector<double> prev = sweep_k(3);
    double err = 1e300;
    for (int k = 4; k <= 18; k++) {
        std::vector<double> cur = sweep_k(k);
        err = 0;
        for (int i = 0; i < l; i++)
            err = std::max(err, std::abs(cur[i] - prev[i]) / std::max(1.0, std::abs(cur[i])));
        prev = std::move(cur);
        if (err < tol) break;
    }
    if (quad_err) *quad_err = err;
    return prev;
}

}  // namespace

PeriodResult periods(const PfaffianSystem& sys, const CycleSpec& cyc, double tol) {
    HyperData hd = specialize_hyper(sys, cyc.lam);
    // validate the oval
    double mid = 0.5 * (cyc.e1 + cyc.e2);
    if (!(cyc.e1 < cyc.e2) || hd.U(mid) >= 0)
        fail(errc::numeric_error, "cycle endpoints do not bound a negative arc of U");
    std::vector<FormEval> forms = specialize_forms(sys, cyc.lam);
    PeriodResult res;
    res.I = integrate_oval(forms, hd, cyc.e1, cyc.e2, cyc.orientation, tol, &res.quad_error);
    return res;
}

VerifyReport pfaffian_residual(const PfaffianSystem& sys, const CycleSpec& cyc, double fd_step,
                               double tol) {
    const FamilySpec& fam = sys.family;
    const int l = sys.l();
    VerifyReport rep;
    rep.fd_step = fd_step;

    PeriodResult base = periods(sys, cyc, tol);
    rep.I = base.I;
    rep.quad_error = base.quad_error;

    auto C_eval = [&](int which, const std::vector<Rat>& lam) {
        Eigen::MatrixXd M(l, l);
        for (int i = 0; i < l; i++)
            for (int j = 0; j < l; j++) M(i, j) = rat_double(sys.C[which][i][j].eval_rat(lam));
        return M;
    };

    Eigen::VectorXd I0(l);
    for (int i = 0; i < l; i++) I0(i) = base.I[i];

    Rat h_rat(0);
    {
        // carry the step exactly through the rational evaluation
        std::ostringstream os;
        os << fd_step;
        h_rat = rat_parse([&] {
            // decimal to rational
            std::string s = os.str();
            auto epos = s.find('e');
            if (epos == std::string::npos) epos = s.find('E');
            long expo = 0;
            std::string mant = s;
            if (epos != std::string::npos) {
                expo = std::stol(s.substr(epos + 1));
                mant = s.substr(0, epos);
            }
            auto dot = mant.find('.');
            if (dot != std::string::npos) {
                expo -= long(mant.size() - dot - 1);
                mant.erase(dot, 1);
            }
            std::string out = mant;
            if (expo > 0)
                out += std::string(expo, '0');
            else if (expo < 0)
                out += "/1" + std::string(-expo, '0');
            return out;
        }());
    }

    for (int s = 0; s < fam.m; s++) {
        bool x2_free = fam.fs_exp[s][1] == 0;
        if (!x2_free) continue;

        std::vector<Rat> lp = cyc.lam, lm = cyc.lam;
        lp[s] += h_rat;
        lm[s] -= h_rat;

        auto eval_at = [&](const std::vector<Rat>& lam) -> Eigen::VectorXd {
            HyperData hd = specialize_hyper(sys, lam);
            double e1 = newton_polish(hd.U, hd.dU, cyc.e1);
            double e2 = newton_polish(hd.U, hd.dU, cyc.e2);
            if (!(e1 < e2) || hd.U(0.5 * (e1 + e2)) >= 0 || std::abs(hd.U(e1)) > 1e-9 ||
                std::abs(hd.U(e2)) > 1e-9)
                fail(errc::numeric_error, "oval collapsed inside the finite-difference stencil");
            std::vector<FormEval> forms = specialize_forms(sys, lam);
            std::vector<double> I =
                integrate_oval(forms, hd, e1, e2, cyc.orientation, tol, nullptr);
            Eigen::VectorXd v(l);
            for (int i = 0; i < l; i++) v(i) = I[i];
            return v;
        };

        Eigen::VectorXd plus = C_eval(0, lp) * eval_at(lp);
        Eigen::VectorXd minus = C_eval(0, lm) * eval_at(lm);
        Eigen::VectorXd fd = (plus - minus) / (2 * fd_step);
        Eigen::VectorXd rhs = C_eval(s + 1, cyc.lam) * I0;
        double res = (fd - rhs).norm() / (rhs.norm() + 1e-12);
        rep.residuals[s + 1] = res;
        rep.max_residual = std::max(rep.max_residual, res);
    }
    return rep;
}

}  // namespace pfaff

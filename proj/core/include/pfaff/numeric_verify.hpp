#pragma once

#include "pfaff/picard_fuchs.hpp"

namespace pfaff {

/// Real oval of the hyperelliptic level set {x2^2 + U(x1) = 0}: a pair of
/// adjacent simple real roots of U with U < 0 strictly in between.
struct CycleSpec {
    std::vector<Rat> lam;  // specialization; x2-dependent monomials must carry 0
    double e1 = 0, e2 = 0;
    int orientation = +1;  // +1 counterclockwise
};

/// All ovals of U at the given specialization (adjacent root pairs with a
/// negative interior), left to right.
std::vector<std::pair<double, double>> find_ovals(const PfaffianSystem& sys,
                                                  const std::vector<Rat>& lam);

CycleSpec make_cycle(const PfaffianSystem& sys, const std::vector<Rat>& lam, int oval_index = 0,
                     int orientation = +1);

struct PeriodResult {
    std::vector<double> I;
    double quad_error = 0;
};

/// Periods of the canonical generators over the oval, by adaptive
/// Gauss-Legendre quadrature on the cosine parameterization of both
/// branches; refined until successive estimates agree to `tol` relative.
PeriodResult periods(const PfaffianSystem& sys, const CycleSpec& cyc, double tol = 1e-9);

struct VerifyReport {
    std::vector<double> I;
    std::map<int, double> residuals;  // 1-based s for x2-free monomials
    double max_residual = 0;
    double fd_step = 0;
    double quad_error = 0;
};

/// Central-difference verification of d/dl_s (C_0 I) = C_s I for every
/// parameter whose monomial is x2-free (so the stencil stays
/// hyperelliptic). Residuals are relative with a small epsilon floor.
VerifyReport pfaffian_residual(const PfaffianSystem& sys, const CycleSpec& cyc,
                               double fd_step = 1e-4, double tol = 1e-9);

}  // namespace pfaff

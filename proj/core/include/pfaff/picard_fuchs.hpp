#pragma once

#include <complex>

#include "pfaff/brieskorn_petrov.hpp"
#include "pfaff/matpoly.hpp"

namespace pfaff {

/// The derived Pfaffian system d/dl_s (C_0 I) = C_s I for the period vector
/// I_i = integral of omega_i over a cycle family on {F = 0}. C_0..C_m are
/// l x l matrix polynomials in the parameters only.
struct PfaffianSystem {
    FamilySpec family;
    CtxPtr lam;                   // lambda-only context
    std::vector<KForm> omega;     // canonical generators, x+lambda context
    std::vector<KForm> eta;       // incomplete ratios eta_i of F mu_i by dF
    std::vector<MatPoly> C;       // size m+1: C_0, C_1..C_m over `lam`
    Poly detC0;
    ModulusEstimate modulus;

    int l() const { return family.l(); }
    int m() const { return family.m; }
    /// lambda weights as a WeightSystem-compatible view (n = 0 x-vars).
    WeightSystem lam_w() const { return WeightSystem(); }
};

PfaffianSystem derive_pfaffian(const Poly& f, const WeightSystem& w,
                               const std::vector<int>& order = {});
PfaffianSystem derive_pfaffian(const FamilySpec& family);

struct HypergeometricRestriction {
    bool ok = false;
    std::vector<std::pair<int, int>> offending;  // entries of C_1 depending on l_1
    std::vector<std::vector<Rat>> A;             // t*1 + A multiplies dI/dt
    std::vector<std::vector<Rat>> B;             // right-hand side matrix
};

/// Restriction to the line l_2..l_m = const parameterized by t = l_1:
/// (t*1 + A) dI/dt = B I with A = C_0 - l_1*1 and B = C_1 - 1 specialized.
/// Refuses (ok = false, offending filled) when C_1 depends on l_1.
HypergeometricRestriction restrict_hypergeometric(const PfaffianSystem& sys,
                                                  const std::vector<Rat>& lam_rest);

struct SpectrumReport {
    bool degenerate = false;
    std::string message;
    std::vector<std::array<std::complex<double>, 2>> critical_points;
    std::vector<std::complex<double>> critical_values;
    std::vector<std::complex<double>> eigenvalues;
    double max_rel_distance = 0;
    std::vector<double> eigvec_residuals;
    double max_eigvec_residual = 0;
};

/// n = 2 only: critical points of F(.,lam*) by resultant elimination and
/// complex root extraction; compares the critical values with eig(C_0(lam*))
/// by optimal matching and checks the evaluation eigenvectors.
SpectrumReport spectrum_check(const PfaffianSystem& sys, const std::vector<Rat>& lam_star);

struct LogPoleReport {
    Poly g;  // squarefree part of det C_0
    bool det_squarefree = false;
    bool logarithmic = false;
    long checked_divisibilities = 0;
    std::vector<std::string> failures;
};

/// Exact test that the connection form has only logarithmic poles on
/// {det C_0 = 0}: with N_s = adj(C_0)(-dC_0/dl_s + C_s) and g the squarefree
/// part of D = det C_0, D must divide g*N_s and all dg-wedge coefficients
/// dg/dl_s * N_t - dg/dl_t * N_s entrywise.
LogPoleReport logpole_check(const PfaffianSystem& sys);

/// Squarefree part of a polynomial monic in l_1 (every nonconstant factor
/// involves l_1): D / gcd(D, dD/dl_1) through a subresultant chain with
/// exact divisions only.
Poly squarefree_part_lam1(const Poly& D, const CtxPtr& lam);

}  // namespace pfaff

#pragma once

#include "pfaff/division.hpp"

namespace pfaff {

/// Division by f in the Brieskorn module, the Euler-identity lemma:
/// given an (n-1)-form eta, produce
///   Multiple:   df^eta = f*mu      + df^d(xi)
///   Derivative: df^eta = d(f*omega) + df^d(xi)
/// with mu an n-form resp. omega an (n-1)-form and xi an (n-2)-form.
enum class EulerVariant { Multiple, Derivative };

struct EulerDivision {
    EulerVariant variant;
    KForm main;  // mu (Multiple) or omega (Derivative)
    KForm xi;    // the (n-2)-form correction
    bool checked = false;
};

EulerDivision euler_divide(const KForm& eta, const Poly& f, const WeightSystem& w,
                           EulerVariant variant);

struct DegreeCheck {
    std::string what;
    bool homogeneous = false;
    std::string expected;  // "" when not applicable
    std::string actual;
    bool ok = true;
};

struct AuditInfo {
    int depth = 0;                      // recursion depth actually used
    std::vector<DegreeCheck> degrees;   // joint quasihomogeneity bookkeeping
    Rat sum_p_norm = 0;                 // sum of parametric norms of p_i / q_i
    Rat input_norm = 0;
    bool bound_applicable = false;      // symmetric weights and defined k
    Rat bound = 0;                      // k! r^{k(n+3)} M^k when applicable
    bool bound_ok = true;
    bool degrees_ok = true;
};

/// omega = sum_i p_i(F,lambda) omega_i + dF^xi + d(xi')
struct PetrovDecomposition {
    std::vector<Poly> p;  // in the x+lambda+F context (x-free)
    KForm xi;
    KForm xi_prime;
    AuditInfo audit;
};

/// mu = sum_i q_i(F,lambda) mu_i + dF^d(zeta)
struct BrieskornDecomposition {
    std::vector<Poly> q;
    KForm zeta;
    AuditInfo audit;
};

PetrovDecomposition petrov_decompose(const KForm& omega, const FamilySpec& family);
BrieskornDecomposition brieskorn_decompose(const KForm& mu, const FamilySpec& family);

/// Norm/degree report for a Petrov decomposition of a jointly
/// quasihomogeneous input against the factorial-exponential bound with
/// M = M_hat (symmetric weights only; degree checks always run).
AuditInfo audit_bounds(const PetrovDecomposition& dec, const KForm& omega,
                       const FamilySpec& family, const ModulusEstimate& modulus);

}  // namespace pfaff

#pragma once

#include "pfaff/family.hpp"
#include "pfaff/local_algebra.hpp"

namespace pfaff {

/// Division with remainder of an n-form by df (or dF):
///   mu = sum_i c_i mu_i + d(f or F) ^ eta,
/// with c_i in Q for plain division of parameter-free input and in Q[lambda]
/// in general. `checked` records that the reconstruction identity was
/// verified exactly before returning.
struct DivisionOutcome {
    std::vector<Poly> c;
    KForm eta;
    bool checked = false;
};

/// Canonical division by df. Each parameter monomial of mu is divided
/// separately; per degree slice the linear system over (c, eta-monomials)
/// is solved in reduced row echelon form with free unknowns set to zero,
/// and degrees above max_i deg mu_i + max_i w_i are reduced into that window
/// by stripping monomial factors (which preserves the norm ratio).
DivisionOutcome divide_by_df(const KForm& mu, const LocalAlgebra& la);

struct ModulusEstimate {
    Rat M_hat = 0;
    KForm witness;
    Rat threshold = 0;  // scan bound: Dstar + max_i w_i
    Rat df_norm = 0;
};

/// Upper-bound surrogate for the division modulus: the worst norm
/// distortion, in either direction, of the canonical division over all
/// monomial n-forms of degree up to the threshold. Divisions of higher
/// degree reduce into the scan window without changing the ratio, so
/// every divide_by_df call satisfies |eta| + sum|c_i| <= M_hat * |mu|.
ModulusEstimate division_modulus(const LocalAlgebra& la);

/// Division by dF = d(f + sum l_s f_s): iterated division by df where the
/// tail -dh^eta is folded back in; the x-degree strictly decreases each
/// round. Input and outputs live in the family's x+lambda context.
DivisionOutcome divide_by_dF(const KForm& mu, const FamilySpec& family);

}  // namespace pfaff

#pragma once

#include <map>
#include <optional>

#include "pfaff/poly.hpp"

namespace pfaff {

/// Weighted degree of a single monomial: x-exponents against w, parameter
/// and F exponents against the weights recorded in the context.
Rat mono_degree(const VarContext& ctx, const WeightSystem& w, const Expv& e);
/// Same, ignoring the parameter/F part (the x-part drives the Euler field).
Rat mono_x_degree(const VarContext& ctx, const WeightSystem& w, const Expv& e);

/// Degree of a polynomial: the maximum over its terms; nullopt for 0.
std::optional<Rat> weighted_degree(const Poly& p, const WeightSystem& w);
std::optional<Rat> x_degree(const Poly& p, const WeightSystem& w);

bool is_quasihomogeneous(const Poly& p, const WeightSystem& w);

/// Split into jointly quasihomogeneous parts, ascending degree.
std::map<Rat, Poly> degree_components(const Poly& p, const WeightSystem& w);
/// Split by x-degree only (parameters ride along), ascending.
std::map<Rat, Poly> x_degree_components(const Poly& p, const WeightSystem& w);

enum class NormMode { plain, parametric };

/// Sum of absolute values of the coefficients of the full expansion.
/// Plain mode refuses polynomials that still contain parameters or F.
Rat norm(const Poly& p, NormMode mode = NormMode::plain);

/// Weights (w, r) making f quasihomogeneous, normalized by sum(w_i) = n.
/// If the exponents leave the weights underdetermined but f is ordinary
/// homogeneous, the symmetric weights are returned.
WeightSystem infer_weights(const Poly& f);

}  // namespace pfaff

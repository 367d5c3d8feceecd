#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pfaff/errors.hpp"
#include "pfaff/rat.hpp"

namespace pfaff {

/// Positive rational weights w_1..w_n normalized by sum(w_i) = n, plus the
/// reference degree r of the distinguished quasihomogeneous polynomial once
/// it is known (r = 0 until then).
struct WeightSystem {
    int n = 0;
    std::vector<Rat> w;
    Rat r = 0;

    WeightSystem() = default;
    WeightSystem(std::vector<Rat> weights, Rat ref_degree = 0);

    static WeightSystem symmetric(int n, Rat ref_degree = 0);

    bool is_symmetric() const;
    Rat max_weight() const;
    Rat min_weight() const;
};

/// Variable layout shared by every Poly/KForm of one computation:
/// x_1..x_nx, then parameters l_1..l_nlam (each with an assigned rational
/// weight), then optionally the formal variable F of weight deg F = r.
/// Exponent vectors are indexed in this order.
class VarContext {
public:
    int nx = 0;
    int nlam = 0;
    bool has_F = false;
    std::vector<Rat> lam_weights;  // size nlam
    Rat F_weight = 0;

    static constexpr int kMaxVars = 32;
    static constexpr int kMaxExp = 255;

    int vars() const { return nx + nlam + (has_F ? 1 : 0); }
    int x_index(int i) const { return i; }             // 0-based
    int lam_index(int s) const { return nx + s; }      // 0-based s
    int F_index() const { return nx + nlam; }

    bool is_x(int v) const { return v < nx; }
    bool is_lam(int v) const { return v >= nx && v < nx + nlam; }
    bool is_F(int v) const { return has_F && v == nx + nlam; }

    std::string var_name(int v) const;
    /// Index of a named variable, -1 if unknown.
    int find_var(const std::string& name) const;

    bool operator==(const VarContext& o) const = default;

    static std::shared_ptr<const VarContext> make_x(int nx);
    static std::shared_ptr<const VarContext> make(int nx, std::vector<Rat> lam_weights,
                                                  bool with_F = false, Rat F_weight = 0);
};

using CtxPtr = std::shared_ptr<const VarContext>;

}  // namespace pfaff

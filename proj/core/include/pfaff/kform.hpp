#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pfaff/grading.hpp"
#include "pfaff/poly.hpp"

namespace pfaff {

/// Polynomial differential k-form. Components are indexed by the strictly
/// increasing subset I of the x-variables, packed as a bitmask, and carry
/// Poly coefficients (which may depend on the parameters).
class KForm {
public:
    KForm() = default;
    KForm(CtxPtr ctx, int k) : ctx_(std::move(ctx)), k_(k) {}

    static KForm zero(CtxPtr ctx, int k) { return KForm(std::move(ctx), k); }
    static KForm from_poly(const Poly& p);  // 0-form
    static KForm dx(CtxPtr ctx, int i);
    static KForm volume(CtxPtr ctx);  // dx_1 ^ ... ^ dx_n
    static KForm make(CtxPtr ctx, int k, std::vector<std::pair<uint32_t, Poly>> comps);

    const CtxPtr& ctx() const { return ctx_; }
    int k() const { return k_; }
    bool is_zero() const { return comps_.empty(); }
    const std::vector<std::pair<uint32_t, Poly>>& comps() const { return comps_; }

    /// Coefficient of dx_I (zero poly when absent).
    Poly coeff(uint32_t mask) const;

    bool operator==(const KForm& o) const;
    bool operator!=(const KForm& o) const { return !(*this == o); }

    KForm operator-() const;
    KForm operator+(const KForm& o) const;
    KForm operator-(const KForm& o) const;
    KForm mul_poly(const Poly& p) const;
    KForm mul_rat(const Rat& c) const;

    KForm lift(const CtxPtr& target) const;
    KForm subst_lambda(const std::vector<Rat>& lam_values) const;

    std::string to_string() const;
    std::string to_json() const;
    static KForm from_json(CtxPtr ctx, const std::string& json_text);
    static KForm parse(CtxPtr ctx, const std::string& text);

private:
    CtxPtr ctx_;
    int k_ = 0;
    std::vector<std::pair<uint32_t, Poly>> comps_;  // sorted by mask, no zero polys

    void normalize();
};

KForm wedge(const KForm& a, const KForm& b);
KForm ext_d(const KForm& a);

enum class EulerOp { lie, interior };
KForm euler_apply(const KForm& a, const WeightSystem& w, EulerOp op);

enum class EulerInverse { plain, shifted };
/// Termwise inverse of the Euler Lie derivative X (plain) or of r^{-1}X + 1
/// (shifted) on n-forms; each monomial n-form is an eigenvector with
/// eigenvalue its x-degree d, resp. d/r + 1.
KForm invert_euler(const KForm& mu, const WeightSystem& w, EulerInverse variant,
                   const Rat& r = 0);

/// Euler-homotopy primitive: sum over x-degree components of i_X(a_d)/d.
/// Requires k >= 1 and da = 0; satisfies d(primitive(a)) = a.
KForm primitive(const KForm& a, const WeightSystem& w);

std::optional<Rat> weighted_degree(const KForm& a, const WeightSystem& w);
std::optional<Rat> x_degree(const KForm& a, const WeightSystem& w);
bool is_quasihomogeneous(const KForm& a, const WeightSystem& w);
std::map<Rat, KForm> x_degree_components(const KForm& a, const WeightSystem& w);
std::map<Rat, KForm> degree_components(const KForm& a, const WeightSystem& w);
Rat norm(const KForm& a, NormMode mode = NormMode::plain);

}  // namespace pfaff

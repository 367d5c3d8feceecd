#pragma once

#include "pfaff/local_algebra.hpp"

namespace pfaff {

/// General deformation F = f + sum_s l_s f_s where f_1..f_m are all monic
/// monomials of weighted degree < r, ordered by (degree, graded-lex) with
/// f_1 = 1, and deg l_s = r - deg f_s keeps F jointly quasihomogeneous.
struct FamilySpec {
    LocalAlgebra la;      // base data in the x-only context
    CtxPtr xl;            // x + lambda
    CtxPtr xlF;           // x + lambda + F
    int m = 0;
    std::vector<Expv> fs_exp;      // exponents of f_s (x part only)
    std::vector<Rat> fs_deg;       // deg f_s
    std::vector<Rat> lam_weights;  // r - deg f_s

    Poly f;   // principal part lifted to xl
    Poly h;   // sum l_s f_s in xl
    Poly F;   // f + h in xl
    KForm dF; // x-differential of F
    KForm dh;

    const WeightSystem& w() const { return la.w; }
    Rat r() const { return la.w.r; }
    int l() const { return la.l; }
    int n() const { return la.n(); }

    Poly f_s(int s) const;             // monic monomial in xl (0-based s)
    KForm mu(int i) const;             // basis n-form in xl
    KForm omega(int i) const;          // Euler-homotopy primitive of mu_i, in xl
    Poly F_var() const;                // the formal variable F in xlF
    Poly to_xlF(const Poly& p_xl) const;
    /// Substitute the formal F by the actual polynomial F(x, lambda).
    Poly subst_F(const Poly& p_xlF) const;
};

/// Family over all monomials of degree < r. `order` optionally permutes the
/// monomials with indices >= 2 (the free term always comes first).
FamilySpec make_family(const Poly& f, const WeightSystem& w,
                       const std::vector<int>& order = {});

/// Family with no deformation monomials at all (F = f); used by tests.
FamilySpec make_bare_family(const Poly& f, const WeightSystem& w);

}  // namespace pfaff

#include "pfaff/family.hpp"

#include <algorithm>
#include <numeric>

namespace pfaff {

Poly FamilySpec::f_s(int s) const {
    Expv e{};
    for (int v = 0; v < n(); v++) e[v] = fs_exp[s][v];
    return Poly::monomial(xl, e, 1);
}

KForm FamilySpec::mu(int i) const { return la.mu(i).lift(xl); }

KForm FamilySpec::omega(int i) const {
    KForm m = mu(i);
    return primitive(m, la.w);
}

Poly FamilySpec::F_var() const { return Poly::variable(xlF, xlF->F_index()); }

Poly FamilySpec::to_xlF(const Poly& p_xl) const { return p_xl.lift(xlF); }

Poly FamilySpec::subst_F(const Poly& p_xlF) const {
    Poly p = p_xlF.subst_var(xlF->F_index(), F.lift(xlF));
    return p.lift(xl);
}

namespace {

struct FamilyOrder {
    Rat deg;
    unsigned tdeg;
    Expv e;
    bool operator<(const FamilyOrder& o) const {
        if (deg != o.deg) return deg < o.deg;
        if (tdeg != o.tdeg) return tdeg < o.tdeg;
        return grlex_cmp(e, o.e) < 0;
    }
};

FamilySpec build(const Poly& f, const WeightSystem& w, std::vector<Expv> monomials,
                 std::vector<Rat> degrees) {
    FamilySpec fam;
    fam.la = analyze(f, w);
    const Rat r = fam.la.w.r;
    const int n = fam.la.n();

    fam.m = int(monomials.size());
    fam.fs_exp = std::move(monomials);
    fam.fs_deg = std::move(degrees);
    for (const Rat& d : fam.fs_deg) fam.lam_weights.push_back(r - d);

    fam.xl = VarContext::make(n, fam.lam_weights, false);
    fam.xlF = VarContext::make(n, fam.lam_weights, true, r);

    fam.f = f.lift(fam.xl);
    Poly h = Poly::zero(fam.xl);
    for (int s = 0; s < fam.m; s++) {
        Expv e{};
        for (int v = 0; v < n; v++) e[v] = fam.fs_exp[s][v];
        e[fam.xl->lam_index(s)] = 1;
        h += Poly::monomial(fam.xl, e, 1);
    }
    fam.h = h;
    fam.F = fam.f + fam.h;
    fam.dF = ext_d(KForm::from_poly(fam.F));
    fam.dh = ext_d(KForm::from_poly(fam.h));
    return fam;
}

}  // namespace

FamilySpec make_family(const Poly& f, const WeightSystem& w, const std::vector<int>& order) {
    LocalAlgebra probe = analyze(f, w);
    const Rat r = probe.w.r;

    // all monomials of weighted degree < r, ordered (degree, total degree,
    // graded-lex); the free term comes first by construction
    std::vector<FamilyOrder> pool;
    {
        std::vector<Rat> reachable{Rat(0)};
        std::map<Rat, bool> seen{{Rat(0), true}};
        for (size_t head = 0; head < reachable.size(); head++)
            for (int i = 0; i < probe.n(); i++) {
                Rat d = reachable[head] + probe.w.w[i];
                if (d < r && !seen.count(d)) {
                    seen[d] = true;
                    reachable.push_back(d);
                }
            }
        std::sort(reachable.begin(), reachable.end());
        for (const Rat& d : reachable)
            for (const Expv& e : probe.monomials_of_degree(d))
                pool.push_back({d, total_deg(e), e});
    }
    std::sort(pool.begin(), pool.end());

    std::vector<Expv> monomials;
    std::vector<Rat> degrees;
    for (const auto& rec : pool) {
        monomials.push_back(rec.e);
        degrees.push_back(rec.deg);
    }

    if (!order.empty()) {
        if (int(order.size()) != int(monomials.size()))
            fail(errc::invalid_argument, "family permutation has the wrong length");
        if (order[0] != 0)
            fail(errc::invalid_argument, "the free term must stay first in the family");
        std::vector<Expv> pm;
        std::vector<Rat> pd;
        for (int idx : order) {
            pm.push_back(monomials.at(idx));
            pd.push_back(degrees.at(idx));
        }
        monomials = std::move(pm);
        degrees = std::move(pd);
    }

    return build(f, w, std::move(monomials), std::move(degrees));
}

FamilySpec make_bare_family(const Poly& f, const WeightSystem& w) {
    return build(f, w, {}, {});
}

}  // namespace pfaff

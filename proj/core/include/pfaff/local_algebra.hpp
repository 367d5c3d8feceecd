#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pfaff/kform.hpp"

namespace pfaff {

/// Monomial basis phi_1..phi_l of C[x]/<df>, computed degree slice by
/// degree slice, together with the Milnor number l, the degree statistics
/// and the basis n-forms mu_i = phi_i dx_1^...^dx_n.
class LocalAlgebra {
public:
    Poly f;          // quasihomogeneous principal part, x-only context
    WeightSystem w;  // with r = deg f
    std::vector<Expv> basis;       // exponents of phi_i, ascending (degree, grlex)
    std::vector<Rat> basis_deg;    // deg phi_i
    int l = 0;
    Rat rho = 0;     // max deg phi - min deg phi
    Rat Dstar = 0;   // max_i deg mu_i

    const CtxPtr& ctx() const { return f.ctx(); }
    int n() const { return w.n; }
    Poly phi(int i) const { return Poly::monomial(f.ctx(), basis[i], 1); }
    KForm mu(int i) const;
    std::string basis_text(int i) const;

    /// Canonical division of the x-monomial n-form x^alpha vol by df:
    /// sparse remainder coefficients over the basis plus the incomplete
    /// ratio eta (an (n-1)-form in the same x-only context).
    struct MonoDivision {
        std::vector<std::pair<int, Rat>> c;
        KForm eta;
    };
    const MonoDivision& divide_monomial(const Expv& alpha) const;

    /// All x-monomials of the given weighted x-degree, ascending grlex.
    std::vector<Expv> monomials_of_degree(const Rat& d) const;

private:
    struct DivisionCache {
        std::mutex mutex;
        std::map<std::vector<uint8_t>, MonoDivision> map;
    };
    // shared between copies; derived data only
    std::shared_ptr<DivisionCache> cache_ = std::make_shared<DivisionCache>();
    friend LocalAlgebra analyze(const Poly&, const WeightSystem&);
    void solve_slice(const Rat& degree) const;
};

/// Slice-by-slice basis extraction; rejects non-isolated singularities by
/// the product-formula count and by survivors above the top degree.
LocalAlgebra analyze(const Poly& f, const WeightSystem& w);

enum class SingClass { A, D, E6, E7, E8, not_simple, unavailable };

struct Classification {
    SingClass type = SingClass::unavailable;
    int k = 0;           // subscript for A_k / D_k
    bool rho_lt_r = false;
    std::string tag_text() const;
};

/// Exact monomial-pattern match against the bivariate simple-singularity
/// normal forms (variable swap allowed); the rho-vs-r verdict is filled for
/// every input.
Classification classify_simple(const LocalAlgebra& la);

}  // namespace pfaff

#include "pfaff/grading.hpp"

#include <algorithm>

namespace pfaff {

Rat mono_degree(const VarContext& ctx, const WeightSystem& w, const Expv& e) {
    Rat d = 0;
    for (int i = 0; i < ctx.nx; i++)
        if (e[i]) d += w.w.at(i) * e[i];
    for (int s = 0; s < ctx.nlam; s++)
        if (e[ctx.lam_index(s)]) d += ctx.lam_weights[s] * e[ctx.lam_index(s)];
    if (ctx.has_F && e[ctx.F_index()]) d += ctx.F_weight * e[ctx.F_index()];
    return d;
}

Rat mono_x_degree(const VarContext& ctx, const WeightSystem& w, const Expv& e) {
    Rat d = 0;
    for (int i = 0; i < ctx.nx; i++)
        if (e[i]) d += w.w.at(i) * e[i];
    return d;
}

std::optional<Rat> weighted_degree(const Poly& p, const WeightSystem& w) {
    if (p.is_zero()) return std::nullopt;
    std::optional<Rat> d;
    for (const Term& t : p.terms()) {
        Rat m = mono_degree(*p.ctx(), w, t.exp);
        if (!d || m > *d) d = m;
    }
    return d;
}

std::optional<Rat> x_degree(const Poly& p, const WeightSystem& w) {
    if (p.is_zero()) return std::nullopt;
    std::optional<Rat> d;
    for (const Term& t : p.terms()) {
        Rat m = mono_x_degree(*p.ctx(), w, t.exp);
        if (!d || m > *d) d = m;
    }
    return d;
}

bool is_quasihomogeneous(const Poly& p, const WeightSystem& w) {
    if (p.is_zero()) return true;
    std::optional<Rat> d;
    for (const Term& t : p.terms()) {
        Rat m = mono_degree(*p.ctx(), w, t.exp);
        if (!d)
            d = m;
        else if (m != *d)
            return false;
    }
    return true;
}

std::map<Rat, Poly> degree_components(const Poly& p, const WeightSystem& w) {
    std::map<Rat, std::vector<Term>> groups;
    for (const Term& t : p.terms()) groups[mono_degree(*p.ctx(), w, t.exp)].push_back(t);
    std::map<Rat, Poly> out;
    for (auto& [d, terms] : groups) out.emplace(d, Poly::from_terms(p.ctx(), std::move(terms)));
    return out;
}

std::map<Rat, Poly> x_degree_components(const Poly& p, const WeightSystem& w) {
    std::map<Rat, std::vector<Term>> groups;
    for (const Term& t : p.terms()) groups[mono_x_degree(*p.ctx(), w, t.exp)].push_back(t);
    std::map<Rat, Poly> out;
    for (auto& [d, terms] : groups) out.emplace(d, Poly::from_terms(p.ctx(), std::move(terms)));
    return out;
}

Rat norm(const Poly& p, NormMode mode) {
    const VarContext& ctx = *p.ctx();
    Rat s = 0;
    for (const Term& t : p.terms()) {
        if (mode == NormMode::plain) {
            for (int v = ctx.nx; v < ctx.vars(); v++)
                if (t.exp[v])
                    fail(errc::invalid_argument,
                         "plain norm of a parameter-dependent polynomial");
        }
        s += rat_abs(t.c);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Weight inference: solve  alpha^(j) . w = r  for all monomials alpha^(j),
// sum w_i = n, by exact Gaussian elimination in the unknowns (w_1..w_n, r).

WeightSystem infer_weights(const Poly& f) {
    const VarContext& ctx = *f.ctx();
    if (ctx.nlam || ctx.has_F)
        fail(errc::invalid_argument, "infer_weights expects a polynomial in x only");
    int n = ctx.nx;
    if (f.is_zero()) fail(errc::not_quasihomogeneous, "zero polynomial has no weight system");

    int cols = n + 1;  // w_1..w_n, r
    std::vector<std::vector<Rat>> rows;
    for (const Term& t : f.terms()) {
        std::vector<Rat> row(cols + 1, Rat(0));
        for (int i = 0; i < n; i++) row[i] = t.exp[i];
        row[n] = -1;
        row[cols] = 0;
        rows.push_back(std::move(row));
    }
    {
        std::vector<Rat> row(cols + 1, Rat(0));
        for (int i = 0; i < n; i++) row[i] = 1;
        row[cols] = n;
        rows.push_back(std::move(row));
    }

    // forward elimination
    std::vector<int> pivot_col;
    size_t rank = 0;
    for (int col = 0; col < cols && rank < rows.size(); col++) {
        size_t sel = rank;
        while (sel < rows.size() && rows[sel][col] == 0) sel++;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        Rat inv = rows[rank][col];
        for (int j = col; j <= cols; j++) rows[rank][j] /= inv;
        for (size_t i = 0; i < rows.size(); i++) {
            if (i == rank || rows[i][col] == 0) continue;
            Rat factor = rows[i][col];
            for (int j = col; j <= cols; j++) rows[i][j] -= factor * rows[rank][j];
        }
        pivot_col.push_back(col);
        rank++;
    }
    // consistency
    for (size_t i = rank; i < rows.size(); i++)
        if (rows[i][cols] != 0)
            fail(errc::not_quasihomogeneous, "no weight system makes the polynomial quasihomogeneous");

    auto extract = [&](const std::vector<Rat>& sol) -> WeightSystem {
        std::vector<Rat> w(sol.begin(), sol.begin() + n);
        for (const Rat& wi : w)
            if (wi <= 0)
                fail(errc::not_quasihomogeneous,
                     "weight system exists only with non-positive weights");
        WeightSystem ws(w, sol[n]);
        return ws;
    };

    if (rank == size_t(cols)) {
        std::vector<Rat> sol(cols, Rat(0));
        for (size_t i = 0; i < rank; i++) sol[pivot_col[i]] = rows[i][cols];
        return extract(sol);
    }

    // underdetermined: accept the symmetric resolution when f is ordinary
    // homogeneous, otherwise the caller must supply weights
    std::optional<unsigned> tdeg;
    bool homogeneous = true;
    for (const Term& t : f.terms()) {
        unsigned d = total_deg(t.exp);
        if (!tdeg)
            tdeg = d;
        else if (d != *tdeg)
            homogeneous = false;
    }
    if (homogeneous) {
        WeightSystem ws = WeightSystem::symmetric(n, Rat(int(*tdeg)));
        return ws;
    }
    fail(errc::underdetermined_weights,
         "exponents do not determine the weights uniquely; pass them explicitly");
}

}  // namespace pfaff

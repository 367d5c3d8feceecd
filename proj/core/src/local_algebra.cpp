#include "pfaff/local_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace pfaff {

namespace {

void enumerate_rec(const WeightSystem& w, int var, const Rat& remaining, Expv& cur,
                   std::vector<Expv>& out) {
    if (var == w.n) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    if (var == w.n - 1) {
        Rat q = remaining / w.w[var];
        if (q >= 0 && boost::multiprecision::denominator(q) == 1 && q <= VarContext::kMaxExp) {
            cur[var] = static_cast<uint8_t>(q.convert_to<long>());
            out.push_back(cur);
            cur[var] = 0;
        }
        return;
    }
    Rat used = 0;
    for (int e = 0; used <= remaining; e++, used += w.w[var]) {
        cur[var] = static_cast<uint8_t>(e);
        enumerate_rec(w, var + 1, remaining - used, cur, out);
        if (e == VarContext::kMaxExp) break;
    }
    cur[var] = 0;
}

}  // namespace

std::vector<Expv> LocalAlgebra::monomials_of_degree(const Rat& d) const {
    std::vector<Expv> out;
    if (d < 0) return out;
    Expv cur{};
    enumerate_rec(w, 0, d, cur, out);
    std::sort(out.begin(), out.end(),
              [](const Expv& a, const Expv& b) { return grlex_cmp(a, b) < 0; });
    return out;
}

KForm LocalAlgebra::mu(int i) const { return KForm::volume(ctx()).mul_poly(phi(i)); }

std::string LocalAlgebra::basis_text(int i) const { return phi(i).to_string(); }

// ---------------------------------------------------------------------------
// analyze

LocalAlgebra analyze(const Poly& f, const WeightSystem& w_in) {
    const CtxPtr& ctx = f.ctx();
    if (ctx->nlam || ctx->has_F)
        fail(errc::invalid_argument, "analyze expects a polynomial in x only");
    if (int(w_in.w.size()) != ctx->nx)
        fail(errc::invalid_argument, "weight count does not match variable count");
    if (f.is_zero()) fail(errc::invalid_argument, "analyze of the zero polynomial");

    WeightSystem w = w_in;
    if (!is_quasihomogeneous(f, w))
        fail(errc::not_quasihomogeneous, "principal part is not quasihomogeneous for the weights");
    w.r = *weighted_degree(f, w);

    LocalAlgebra la;
    la.f = f;
    la.w = w;
    const int n = ctx->nx;

    // multiplicity by the product formula; non-positive factors mean the
    // critical point cannot be isolated
    Rat formula = 1;
    for (int i = 0; i < n; i++) {
        Rat factor = (w.r - w.w[i]) / w.w[i];
        if (factor <= 0)
            fail(errc::non_isolated, "degree r <= w_i leaves no isolated critical point");
        formula *= factor;
    }
    if (boost::multiprecision::denominator(formula) != 1)
        fail(errc::non_isolated, "multiplicity formula is not an integer");
    long expected_l = formula.convert_to<long>();

    Rat top = 0;
    for (int i = 0; i < n; i++) top += w.r - 2 * w.w[i];
    Rat bound = top + w.max_weight();

    std::vector<Poly> partials;
    for (int i = 0; i < n; i++) partials.push_back(f.derivative(i));

    // achievable slice degrees up to the bound
    std::vector<Rat> reachable{Rat(0)};
    {
        std::map<Rat, bool> seen{{Rat(0), true}};
        for (size_t head = 0; head < reachable.size(); head++)
            for (int i = 0; i < n; i++) {
                Rat d = reachable[head] + w.w[i];
                if (d <= bound && !seen.count(d)) {
                    seen[d] = true;
                    reachable.push_back(d);
                }
            }
        std::sort(reachable.begin(), reachable.end());
    }

    long count = 0;
    for (const Rat& d : reachable) {
        std::vector<Expv> monos = la.monomials_of_degree(d);
        if (monos.empty()) continue;
        std::map<std::vector<uint8_t>, int> index;
        for (size_t j = 0; j < monos.size(); j++) {
            std::vector<uint8_t> key(monos[j].begin(), monos[j].begin() + n);
            index.emplace(std::move(key), int(j));
        }
        const int cols = int(monos.size());

        std::vector<std::vector<Rat>> span;
        std::vector<int> pivots;
        auto reduce_add = [&](std::vector<Rat> v) -> bool {
            for (size_t rix = 0; rix < span.size(); rix++) {
                if (v[pivots[rix]] == 0) continue;
                Rat factor = v[pivots[rix]];
                for (int c = 0; c < cols; c++) v[c] -= factor * span[rix][c];
            }
            int p = -1;
            for (int c = 0; c < cols; c++)
                if (v[c] != 0) {
                    p = c;
                    break;
                }
            if (p < 0) return false;
            Rat inv = v[p];
            for (int c = 0; c < cols; c++) v[c] /= inv;
            span.push_back(std::move(v));
            pivots.push_back(p);
            return true;
        };

        for (int i = 0; i < n; i++) {
            Rat gamma_deg = d - (w.r - w.w[i]);
            if (gamma_deg < 0) continue;
            std::vector<Expv> gammas;
            Expv cur{};
            enumerate_rec(w, 0, gamma_deg, cur, gammas);
            for (const Expv& g : gammas) {
                Poly gen = partials[i].mul_term(g, 1);
                if (gen.is_zero()) continue;
                std::vector<Rat> v(cols, Rat(0));
                for (const Term& t : gen.terms()) {
                    std::vector<uint8_t> key(t.exp.begin(), t.exp.begin() + n);
                    v[index.at(key)] = t.c;
                }
                reduce_add(std::move(v));
            }
        }

        // greedy ascending selection of quotient representatives
        for (int j = 0; j < cols; j++) {
            std::vector<Rat> v(cols, Rat(0));
            v[j] = 1;
            if (reduce_add(std::move(v))) {
                if (d > top)
                    fail(errc::non_isolated,
                         "local algebra does not stabilize above the top slice");
                la.basis.push_back(monos[j]);
                la.basis_deg.push_back(d);
                count++;
                if (count > expected_l)
                    fail(errc::non_isolated,
                         "local algebra dimension exceeds the multiplicity formula");
            }
        }
    }

    if (count != expected_l)
        fail(errc::non_isolated, "local algebra dimension disagrees with the multiplicity formula");

    la.l = int(count);
    la.rho = la.basis_deg.back() - la.basis_deg.front();
    la.Dstar = la.basis_deg.back() + n;
    return la;
}

// ---------------------------------------------------------------------------
// canonical monomial division with caching

void LocalAlgebra::solve_slice(const Rat& degree) const {
    const int n = w.n;
    Rat poly_deg = degree - n;
    std::vector<Expv> rows = monomials_of_degree(poly_deg);
    if (rows.empty()) return;
    std::map<std::vector<uint8_t>, int> row_index;
    for (size_t j = 0; j < rows.size(); j++) {
        std::vector<uint8_t> key(rows[j].begin(), rows[j].begin() + n);
        row_index.emplace(std::move(key), int(j));
    }
    const int R = int(rows.size());

    // unknowns: c_i with deg mu_i == degree first, then eta monomials
    // x^gamma dx_ihat ordered (mask asc, gamma grlex asc)
    struct Col {
        bool is_c;
        int i;  // basis index for c, dropped variable for eta
        Expv gamma{};
    };
    std::vector<Col> cols;
    for (int i = 0; i < l; i++)
        if (basis_deg[i] + n == degree) cols.push_back({true, i, {}});
    KForm df = ext_d(KForm::from_poly(f));
    uint32_t full = (1u << n) - 1;
    for (int drop = n - 1; drop >= 0; drop--) {
        Rat gamma_deg = degree - w.r - n + w.w[drop];
        if (gamma_deg < 0) continue;
        for (const Expv& g : monomials_of_degree(gamma_deg)) cols.push_back({false, drop, g});
    }

    const int C = int(cols.size());
    std::vector<std::vector<Rat>> M(R, std::vector<Rat>(C + R, Rat(0)));
    for (int c = 0; c < C; c++) {
        if (cols[c].is_c) {
            std::vector<uint8_t> key(basis[cols[c].i].begin(), basis[cols[c].i].begin() + n);
            M[row_index.at(key)][c] = 1;
        } else {
            KForm eta_mono =
                KForm::make(ctx(), n - 1,
                            {{full & ~(1u << cols[c].i), Poly::monomial(ctx(), cols[c].gamma, 1)}});
            KForm prod = wedge(df, eta_mono);
            for (const auto& [m, p] : prod.comps()) {
                (void)m;
                for (const Term& t : p.terms()) {
                    std::vector<uint8_t> key(t.exp.begin(), t.exp.begin() + n);
                    M[row_index.at(key)][c] = t.c;
                }
            }
        }
    }
    for (int r0 = 0; r0 < R; r0++) M[r0][C + r0] = 1;

    // RREF with pivots restricted to the unknown block
    std::vector<int> pivot_of_row(R, -1);
    int rank = 0;
    for (int c = 0; c < C && rank < R; c++) {
        int sel = -1;
        for (int r0 = rank; r0 < R; r0++)
            if (M[r0][c] != 0) {
                sel = r0;
                break;
            }
        if (sel < 0) continue;
        std::swap(M[rank], M[sel]);
        Rat inv = M[rank][c];
        for (int j = c; j < C + R; j++) M[rank][j] /= inv;
        for (int r0 = 0; r0 < R; r0++) {
            if (r0 == rank || M[r0][c] == 0) continue;
            Rat factor = M[r0][c];
            for (int j = c; j < C + R; j++) M[r0][j] -= factor * M[rank][j];
        }
        pivot_of_row[rank] = c;
        rank++;
    }
    if (rank < R) fail(errc::internal_error, "division slice system is rank deficient");

    // free unknowns zero: the solution for RHS e_t is column C+t of the
    // pivot rows
    for (int tcol = 0; tcol < R; tcol++) {
        MonoDivision out;
        std::map<uint32_t, std::vector<Term>> eta_terms;
        for (int r0 = 0; r0 < R; r0++) {
            const Rat& val = M[r0][C + tcol];
            if (val == 0) continue;
            const Col& col = cols[pivot_of_row[r0]];
            if (col.is_c)
                out.c.emplace_back(col.i, val);
            else
                eta_terms[full & ~(1u << col.i)].push_back({col.gamma, val});
        }
        std::vector<std::pair<uint32_t, Poly>> eta_comps;
        for (auto& [m, ts] : eta_terms)
            eta_comps.emplace_back(m, Poly::from_terms(ctx(), std::move(ts)));
        out.eta = KForm::make(ctx(), n - 1, std::move(eta_comps));
        std::sort(out.c.begin(), out.c.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<uint8_t> key(rows[tcol].begin(), rows[tcol].begin() + n);
        cache_->map.emplace(std::move(key), std::move(out));
    }
}

const LocalAlgebra::MonoDivision& LocalAlgebra::divide_monomial(const Expv& alpha) const {
    const int n = w.n;
    std::vector<uint8_t> key(alpha.begin(), alpha.begin() + n);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->map.find(key);
    if (it != cache_->map.end()) return it->second;

    Rat d = n;
    for (int i = 0; i < n; i++) d += w.w[i] * alpha[i];
    Rat threshold = Dstar + w.max_weight();

    if (d <= threshold) {
        solve_slice(d);
        it = cache_->map.find(key);
        if (it == cache_->map.end())
            fail(errc::internal_error, "slice solve did not cover the requested monomial");
        return it->second;
    }

    // strip monomial factors until the degree lands in (Dstar, threshold];
    // there the division has no remainder, and multiplying eta back by the
    // stripped monomial preserves both the identity and the norm
    Expv strip{};
    Expv low = alpha;
    Rat dl = d;
    while (dl > threshold) {
        int i = 0;
        while (low[i] == 0) i++;
        low[i]--;
        strip[i]++;
        dl -= w.w[i];
    }
    MonoDivision out;
    {
        std::vector<uint8_t> lkey(low.begin(), low.begin() + n);
        auto lit = cache_->map.find(lkey);
        if (lit == cache_->map.end()) {
            solve_slice(dl);
            lit = cache_->map.find(lkey);
            if (lit == cache_->map.end())
                fail(errc::internal_error, "slice solve did not cover the stripped monomial");
        }
        const MonoDivision& lowdiv = lit->second;
        if (!lowdiv.c.empty())
            fail(errc::internal_error, "no remainder expected above the basis degrees");
        std::vector<std::pair<uint32_t, Poly>> comps;
        for (const auto& [m, p] : lowdiv.eta.comps()) comps.emplace_back(m, p.mul_term(strip, 1));
        out.eta = KForm::make(ctx(), n - 1, std::move(comps));
    }
    auto [fin, ok] = cache_->map.emplace(std::move(key), std::move(out));
    (void)ok;
    return fin->second;
}

// ---------------------------------------------------------------------------
// classification

std::string Classification::tag_text() const {
    switch (type) {
        case SingClass::A: return "A" + std::to_string(k);
        case SingClass::D: return "D" + std::to_string(k);
        case SingClass::E6: return "E6";
        case SingClass::E7: return "E7";
        case SingClass::E8: return "E8";
        case SingClass::not_simple: return "not_simple";
        case SingClass::unavailable: return "unavailable";
    }
    return "unavailable";
}

namespace {

bool match_pattern(std::vector<std::pair<int, int>> exps, std::vector<std::pair<int, int>> pat) {
    if (exps.size() != pat.size()) return false;
    std::sort(exps.begin(), exps.end());
    std::sort(pat.begin(), pat.end());
    return exps == pat;
}

}  // namespace

Classification classify_simple(const LocalAlgebra& la) {
    Classification cl;
    cl.rho_lt_r = la.rho < la.w.r;
    if (la.n() != 2) {
        cl.type = SingClass::unavailable;
        return cl;
    }
    std::vector<std::pair<int, int>> exps;
    bool units = true;
    for (const Term& t : la.f.terms()) {
        if (t.c != 1) units = false;
        exps.emplace_back(t.exp[0], t.exp[1]);
    }
    cl.type = SingClass::not_simple;
    if (!units) return cl;

    auto swapped = [&](const std::vector<std::pair<int, int>>& p) {
        std::vector<std::pair<int, int>> q;
        for (auto [a, b] : p) q.emplace_back(b, a);
        return q;
    };
    auto matches = [&](const std::vector<std::pair<int, int>>& pat) {
        return match_pattern(exps, pat) || match_pattern(exps, swapped(pat));
    };

    for (int k = 1; k <= 2 * VarContext::kMaxExp; k++)
        if (matches({{k + 1, 0}, {0, 2}})) {
            cl.type = SingClass::A;
            cl.k = k;
            return cl;
        }
    for (int k = 4; k <= 2 * VarContext::kMaxExp; k++)
        if (matches({{2, 1}, {0, k - 1}})) {
            cl.type = SingClass::D;
            cl.k = k;
            return cl;
        }
    if (matches({{3, 0}, {0, 4}})) cl.type = SingClass::E6;
    else if (matches({{3, 0}, {1, 3}})) cl.type = SingClass::E7;
    else if (matches({{3, 0}, {0, 5}})) cl.type = SingClass::E8;
    return cl;
}

}  // namespace pfaff

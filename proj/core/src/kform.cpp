#include "pfaff/kform.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "json.hpp"

namespace pfaff {

namespace {

int popcount(uint32_t m) { return std::popcount(m); }

/// Sign of dx_a ^ dx_b for disjoint index sets: (-1)^{#inversions}.
int merge_sign(uint32_t a, uint32_t b) {
    int inv = 0;
    for (int j = 0; j < 32; j++)
        if (b & (1u << j)) inv += popcount(a & ~((1u << (j + 1)) - 1));
    return inv % 2 ? -1 : 1;
}

}  // namespace

void KForm::normalize() {
    std::sort(comps_.begin(), comps_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<uint32_t, Poly>> out;
    for (auto& [m, p] : comps_) {
        if (!out.empty() && out.back().first == m)
            out.back().second += p;
        else
            out.emplace_back(m, std::move(p));
        if (!out.empty() && out.back().second.is_zero()) out.pop_back();
    }
    comps_ = std::move(out);
}

KForm KForm::make(CtxPtr ctx, int k, std::vector<std::pair<uint32_t, Poly>> comps) {
    KForm f(std::move(ctx), k);
    for (auto& [m, p] : comps) {
        if (popcount(m) != k) fail(errc::internal_error, "component index size != k");
        f.comps_.emplace_back(m, std::move(p));
    }
    f.normalize();
    return f;
}

KForm KForm::from_poly(const Poly& p) {
    KForm f(p.ctx(), 0);
    if (!p.is_zero()) f.comps_.emplace_back(0u, p);
    return f;
}

KForm KForm::dx(CtxPtr ctx, int i) {
    if (i < 0 || i >= ctx->nx) fail(errc::invalid_argument, "dx index out of range");
    KForm f(ctx, 1);
    f.comps_.emplace_back(1u << i, Poly::constant(ctx, 1));
    return f;
}

KForm KForm::volume(CtxPtr ctx) {
    int n = ctx->nx;
    KForm f(ctx, n);
    f.comps_.emplace_back((n == 32 ? ~0u : (1u << n) - 1), Poly::constant(ctx, 1));
    return f;
}

Poly KForm::coeff(uint32_t mask) const {
    for (const auto& [m, p] : comps_)
        if (m == mask) return p;
    return Poly::zero(ctx_);
}

bool KForm::operator==(const KForm& o) const {
    if (k_ != o.k_ || comps_.size() != o.comps_.size()) return false;
    for (size_t i = 0; i < comps_.size(); i++)
        if (comps_[i].first != o.comps_[i].first || comps_[i].second != o.comps_[i].second)
            return false;
    return true;
}

KForm KForm::operator-() const {
    KForm r(*this);
    for (auto& [m, p] : r.comps_) p = -p;
    return r;
}

KForm KForm::operator+(const KForm& o) const {
    if (k_ != o.k_ && !is_zero() && !o.is_zero())
        fail(errc::invalid_argument, "adding forms of different degree");
    KForm r(ctx_ ? ctx_ : o.ctx_, is_zero() ? o.k_ : k_);
    r.comps_ = comps_;
    for (const auto& c : o.comps_) r.comps_.push_back(c);
    r.normalize();
    return r;
}

KForm KForm::operator-(const KForm& o) const { return *this + (-o); }

KForm KForm::mul_poly(const Poly& p) const {
    KForm r(ctx_, k_);
    if (p.is_zero()) return r;
    for (const auto& [m, q] : comps_) {
        Poly prod = q * p;
        if (!prod.is_zero()) r.comps_.emplace_back(m, std::move(prod));
    }
    return r;
}

KForm KForm::mul_rat(const Rat& c) const {
    KForm r(ctx_, k_);
    if (c == 0) return r;
    for (const auto& [m, q] : comps_) r.comps_.emplace_back(m, q.mul_rat(c));
    return r;
}

KForm KForm::lift(const CtxPtr& target) const {
    KForm r(target, k_);
    for (const auto& [m, p] : comps_) r.comps_.emplace_back(m, p.lift(target));
    r.normalize();
    return r;
}

KForm KForm::subst_lambda(const std::vector<Rat>& lam_values) const {
    if (int(lam_values.size()) != ctx_->nlam)
        fail(errc::invalid_argument, "lambda value count mismatch");
    KForm r(ctx_, k_);
    for (const auto& [m, p] : comps_) {
        Poly q = p;
        for (int s = 0; s < ctx_->nlam; s++) q = q.subst_var(ctx_->lam_index(s), lam_values[s]);
        if (!q.is_zero()) r.comps_.emplace_back(m, std::move(q));
    }
    r.normalize();
    return r;
}

// ---------------------------------------------------------------------------
// Exterior algebra operations

KForm wedge(const KForm& a, const KForm& b) {
    const CtxPtr& ctx = a.ctx() ? a.ctx() : b.ctx();
    int k = a.k() + b.k();
    if (k > ctx->nx) fail(errc::domain_error, "wedge degree exceeds variable count");
    KForm r(ctx, k);
    std::vector<std::pair<uint32_t, Poly>> acc;
    for (const auto& [ma, pa] : a.comps())
        for (const auto& [mb, pb] : b.comps()) {
            if (ma & mb) continue;
            Poly prod = pa * pb;
            if (prod.is_zero()) continue;
            if (merge_sign(ma, mb) < 0) prod = -prod;
            acc.emplace_back(ma | mb, std::move(prod));
        }
    return KForm::make(ctx, k, std::move(acc));
}

KForm ext_d(const KForm& a) {
    const CtxPtr& ctx = a.ctx();
    if (!ctx || a.is_zero()) return KForm(ctx, a.k() ? a.k() + 1 : 1);
    int k = a.k() + 1;
    if (k > ctx->nx) return KForm(ctx, a.k());  // d of an n-form is 0 (degree n kept)
    std::vector<std::pair<uint32_t, Poly>> acc;
    for (const auto& [m, p] : a.comps())
        for (int j = 0; j < ctx->nx; j++) {
            if (m & (1u << j)) continue;
            Poly dp = p.derivative(ctx->x_index(j));
            if (dp.is_zero()) continue;
            if (merge_sign(1u << j, m) < 0) dp = -dp;  // dx_j ^ dx_I
            acc.emplace_back(m | (1u << j), std::move(dp));
        }
    return KForm::make(ctx, k, std::move(acc));
}

KForm euler_apply(const KForm& a, const WeightSystem& w, EulerOp op) {
    const CtxPtr& ctx = a.ctx();
    if (op == EulerOp::interior) {
        if (a.k() == 0) fail(errc::domain_error, "interior product of a 0-form");
        std::vector<std::pair<uint32_t, Poly>> acc;
        for (const auto& [m, p] : a.comps()) {
            for (int i = 0; i < ctx->nx; i++) {
                if (!(m & (1u << i))) continue;
                int pos = popcount(m & ((1u << i) - 1));
                Poly q = p.mul_term(
                    [&] {
                        Expv e{};
                        e[ctx->x_index(i)] = 1;
                        return e;
                    }(),
                    pos % 2 ? -w.w[i] : w.w[i]);
                if (!q.is_zero()) acc.emplace_back(m & ~(1u << i), std::move(q));
            }
        }
        return KForm::make(ctx, a.k() - 1, std::move(acc));
    }
    // Lie derivative along X; on 0-forms this is Xg directly
    if (a.k() == 0) {
        Poly g = a.coeff(0);
        Poly sum = Poly::zero(ctx);
        for (int i = 0; i < ctx->nx; i++) {
            Expv e{};
            e[ctx->x_index(i)] = 1;
            sum += g.derivative(ctx->x_index(i)).mul_term(e, w.w[i]);
        }
        return KForm::from_poly(sum);
    }
    KForm lhs = a.k() < ctx->nx ? euler_apply(ext_d(a), w, EulerOp::interior)
                                : KForm::zero(ctx, a.k());
    return ext_d(euler_apply(a, w, EulerOp::interior)) + lhs;
}

KForm invert_euler(const KForm& mu, const WeightSystem& w, EulerInverse variant, const Rat& r) {
    const CtxPtr& ctx = mu.ctx();
    if (mu.k() != ctx->nx) fail(errc::invalid_argument, "invert_euler expects an n-form");
    if (variant == EulerInverse::shifted && r <= 0)
        fail(errc::invalid_argument, "shifted inverse needs r > 0");
    KForm out(ctx, mu.k());
    std::vector<std::pair<uint32_t, Poly>> acc;
    for (const auto& [m, p] : mu.comps()) {
        PolyBuilder b(ctx);
        for (const Term& t : p.terms()) {
            Rat d = mono_x_degree(*ctx, w, t.exp);
            for (int i = 0; i < ctx->nx; i++)
                if (m & (1u << i)) d += w.w[i];
            if (d == 0) fail(errc::domain_error, "Euler operator is singular on degree-0 terms");
            Rat eig = variant == EulerInverse::plain ? d : Rat(d / r + 1);
            b.add(t.exp, t.c / eig);
        }
        Poly q = b.build();
        if (!q.is_zero()) acc.emplace_back(m, std::move(q));
    }
    return KForm::make(ctx, mu.k(), std::move(acc));
}

KForm primitive(const KForm& a, const WeightSystem& w) {
    if (a.k() < 1) fail(errc::invalid_argument, "primitive requires k >= 1");
    if (a.is_zero()) return KForm(a.ctx(), a.k() - 1);
    if (!ext_d(a).is_zero()) fail(errc::domain_error, "primitive of a non-closed form");
    KForm out(a.ctx(), a.k() - 1);
    for (const auto& [d, comp] : x_degree_components(a, w)) {
        if (d <= 0) fail(errc::internal_error, "positive-degree component expected");
        out = out + euler_apply(comp, w, EulerOp::interior).mul_rat(Rat(1) / d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Degrees and norms

std::optional<Rat> weighted_degree(const KForm& a, const WeightSystem& w) {
    std::optional<Rat> best;
    const CtxPtr& ctx = a.ctx();
    for (const auto& [m, p] : a.comps()) {
        Rat base = 0;
        for (int i = 0; i < ctx->nx; i++)
            if (m & (1u << i)) base += w.w[i];
        for (const Term& t : p.terms()) {
            Rat d = base + mono_degree(*ctx, w, t.exp);
            if (!best || d > *best) best = d;
        }
    }
    return best;
}

std::optional<Rat> x_degree(const KForm& a, const WeightSystem& w) {
    std::optional<Rat> best;
    const CtxPtr& ctx = a.ctx();
    for (const auto& [m, p] : a.comps()) {
        Rat base = 0;
        for (int i = 0; i < ctx->nx; i++)
            if (m & (1u << i)) base += w.w[i];
        for (const Term& t : p.terms()) {
            Rat d = base + mono_x_degree(*ctx, w, t.exp);
            if (!best || d > *best) best = d;
        }
    }
    return best;
}

bool is_quasihomogeneous(const KForm& a, const WeightSystem& w) {
    std::optional<Rat> ref;
    const CtxPtr& ctx = a.ctx();
    for (const auto& [m, p] : a.comps()) {
        Rat base = 0;
        for (int i = 0; i < ctx->nx; i++)
            if (m & (1u << i)) base += w.w[i];
        for (const Term& t : p.terms()) {
            Rat d = base + mono_degree(*ctx, w, t.exp);
            if (!ref)
                ref = d;
            else if (d != *ref)
                return false;
        }
    }
    return true;
}

namespace {

template <typename DegFn>
std::map<Rat, KForm> split_by(const KForm& a, DegFn deg) {
    std::map<Rat, std::vector<std::pair<uint32_t, std::vector<Term>>>> groups;
    const CtxPtr& ctx = a.ctx();
    for (const auto& [m, p] : a.comps())
        for (const Term& t : p.terms()) {
            Rat d = deg(m, t.exp);
            auto& vec = groups[d];
            if (vec.empty() || vec.back().first != m) vec.push_back({m, {}});
            vec.back().second.push_back(t);
        }
    std::map<Rat, KForm> out;
    for (auto& [d, vec] : groups) {
        std::vector<std::pair<uint32_t, Poly>> comps;
        for (auto& [m, terms] : vec) comps.emplace_back(m, Poly::from_terms(ctx, std::move(terms)));
        out.emplace(d, KForm::make(ctx, a.k(), std::move(comps)));
    }
    return out;
}

}  // namespace

std::map<Rat, KForm> x_degree_components(const KForm& a, const WeightSystem& w) {
    const CtxPtr& ctx = a.ctx();
    return split_by(a, [&](uint32_t m, const Expv& e) {
        Rat d = mono_x_degree(*ctx, w, e);
        for (int i = 0; i < ctx->nx; i++)
            if (m & (1u << i)) d += w.w[i];
        return d;
    });
}

std::map<Rat, KForm> degree_components(const KForm& a, const WeightSystem& w) {
    const CtxPtr& ctx = a.ctx();
    return split_by(a, [&](uint32_t m, const Expv& e) {
        Rat d = mono_degree(*ctx, w, e);
        for (int i = 0; i < ctx->nx; i++)
            if (m & (1u << i)) d += w.w[i];
        return d;
    });
}

Rat norm(const KForm& a, NormMode mode) {
    Rat s = 0;
    for (const auto& [m, p] : a.comps()) s += norm(p, mode);
    return s;
}

// ---------------------------------------------------------------------------
// Text / JSON

std::string KForm::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, p] : comps_) {
        if (!first) os << " + ";
        first = false;
        bool needs_parens = p.terms().size() > 1 || p.terms()[0].c < 0 ||
                            (p.terms()[0].c != 1 || total_deg(p.terms()[0].exp) > 0);
        if (m == 0) {
            os << p.to_string();
            continue;
        }
        if (needs_parens) os << "(" << p.to_string() << ")*";
        bool first_dx = true;
        for (int i = 0; i < ctx_->nx; i++) {
            if (!(m & (1u << i))) continue;
            if (!first_dx) os << "*";
            os << "dx" << (i + 1);
            first_dx = false;
        }
    }
    return os.str();
}

std::string KForm::to_json() const {
    nlohmann::ordered_json j;
    j["k"] = k_;
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& [m, p] : comps_) {
        nlohmann::ordered_json rec;
        std::vector<int> idx;
        for (int i = 0; i < ctx_->nx; i++)
            if (m & (1u << i)) idx.push_back(i + 1);
        rec["dx"] = idx;
        rec["poly"] = nlohmann::ordered_json::parse(p.to_json());
        j["terms"].push_back(rec);
    }
    return j.dump();
}

KForm KForm::from_json(CtxPtr ctx, const std::string& json_text) {
    auto j = nlohmann::json::parse(json_text);
    int k = j.at("k").get<int>();
    std::vector<std::pair<uint32_t, Poly>> comps;
    for (const auto& rec : j.at("terms")) {
        uint32_t m = 0;
        for (int i : rec.at("dx").get<std::vector<int>>()) m |= 1u << (i - 1);
        comps.emplace_back(m, Poly::from_json(ctx, rec.at("poly").dump()));
    }
    return KForm::make(std::move(ctx), k, std::move(comps));
}

// Form text: sum of products; each product mixes scalar factors (parsed by
// the Poly grammar) and dx<i> atoms, e.g. "x1^2*dx1*dx2 - 1/2*dx2".
KForm KForm::parse(CtxPtr ctx, const std::string& text) {
    // Tokenize on top-level '+'/'-' then split each product on '*' and feed
    // the scalar factors back through Poly::parse.
    size_t pos = 0;
    int depth = 0;
    std::vector<std::pair<int, std::string>> products;  // sign, text
    {
        int sign = 1;
        size_t start = 0;
        auto flush = [&](size_t end) {
            std::string piece = text.substr(start, end - start);
            if (piece.find_first_not_of(" \t") != std::string::npos)
                products.push_back({sign, piece});
        };
        for (pos = 0; pos < text.size(); pos++) {
            char c = text[pos];
            if (c == '(') depth++;
            if (c == ')') depth--;
            if (depth == 0 && (c == '+' || c == '-')) {
                // unary sign at the start of a product
                size_t probe = text.find_first_not_of(" \t", start);
                if (probe == pos) {
                    if (c == '-') sign = -sign;
                    start = pos + 1;
                    continue;
                }
                flush(pos);
                sign = c == '-' ? -1 : 1;
                start = pos + 1;
            }
        }
        flush(text.size());
    }
    if (products.empty()) return KForm(ctx, 0);

    std::optional<int> k;
    std::vector<std::pair<uint32_t, Poly>> comps;
    for (auto& [sign, prod] : products) {
        // split on top-level '*'
        std::vector<std::string> factors;
        int d2 = 0;
        size_t st = 0;
        for (size_t i = 0; i <= prod.size(); i++) {
            if (i < prod.size() && prod[i] == '(') d2++;
            if (i < prod.size() && prod[i] == ')') d2--;
            if (i == prod.size() || (d2 == 0 && prod[i] == '*')) {
                factors.push_back(prod.substr(st, i - st));
                st = i + 1;
            }
        }
        Poly scalar = Poly::constant(ctx, sign);
        uint32_t mask = 0;
        int sgn_sort = 1;
        std::vector<int> dxs;
        for (auto& f : factors) {
            std::string trimmed = f;
            size_t a = trimmed.find_first_not_of(" \t");
            size_t b = trimmed.find_last_not_of(" \t");
            if (a == std::string::npos) fail(errc::parse_error, "empty factor in form text");
            trimmed = trimmed.substr(a, b - a + 1);
            if (trimmed.size() >= 3 && trimmed[0] == 'd' && trimmed[1] == 'x') {
                int i = std::atoi(trimmed.c_str() + 2) - 1;
                if (i < 0 || i >= ctx->nx) fail(errc::parse_error, "bad dx index in form text");
                dxs.push_back(i);
            } else {
                scalar *= Poly::parse(ctx, trimmed);
            }
        }
        // wedge sign of the listed dx order vs sorted order
        for (size_t i = 0; i < dxs.size(); i++)
            for (size_t j = i + 1; j < dxs.size(); j++) {
                if (dxs[i] == dxs[j]) scalar = Poly::zero(ctx);
                if (dxs[i] > dxs[j]) sgn_sort = -sgn_sort;
            }
        for (int i : dxs) mask |= 1u << i;
        if (!k)
            k = int(dxs.size());
        else if (*k != int(dxs.size()) && !scalar.is_zero())
            fail(errc::parse_error, "mixed form degrees in form text");
        if (sgn_sort < 0) scalar = -scalar;
        if (!scalar.is_zero()) comps.emplace_back(mask, std::move(scalar));
    }
    return KForm::make(std::move(ctx), k.value_or(0), std::move(comps));
}

}  // namespace pfaff

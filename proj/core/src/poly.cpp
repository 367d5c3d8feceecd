#include "pfaff/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace pfaff {

// ---------------------------------------------------------------------------
// Rat helpers

Rat rat_parse(const std::string& text) {
    try {
        if (text.empty()) fail(errc::parse_error, "empty rational literal");
        Rat r(text);
        return r;
    } catch (const std::exception&) {
        fail(errc::parse_error, "bad rational literal '" + text + "'");
    }
}

// ---------------------------------------------------------------------------
// WeightSystem / VarContext

WeightSystem::WeightSystem(std::vector<Rat> weights, Rat ref_degree)
    : n(static_cast<int>(weights.size())), w(std::move(weights)), r(std::move(ref_degree)) {
    Rat sum = 0;
    for (const Rat& wi : w) {
        if (wi <= 0) fail(errc::invalid_argument, "weights must be positive");
        sum += wi;
    }
    if (sum != n) fail(errc::invalid_argument, "weights must satisfy w_1+...+w_n = n");
}

WeightSystem WeightSystem::symmetric(int n, Rat ref_degree) {
    return WeightSystem(std::vector<Rat>(n, Rat(1)), std::move(ref_degree));
}

bool WeightSystem::is_symmetric() const {
    for (const Rat& wi : w)
        if (wi != 1) return false;
    return true;
}

Rat WeightSystem::max_weight() const {
    Rat m = w.at(0);
    for (const Rat& wi : w) m = std::max(m, wi);
    return m;
}

Rat WeightSystem::min_weight() const {
    Rat m = w.at(0);
    for (const Rat& wi : w) m = std::min(m, wi);
    return m;
}

std::string VarContext::var_name(int v) const {
    if (v < nx) return "x" + std::to_string(v + 1);
    if (v < nx + nlam) return "l" + std::to_string(v - nx + 1);
    if (is_F(v)) return "F";
    fail(errc::internal_error, "variable index out of range");
}

int VarContext::find_var(const std::string& name) const {
    if (name == "F") return has_F ? F_index() : -1;
    if (name.size() < 2) return -1;
    char head = name[0];
    for (size_t i = 1; i < name.size(); i++)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    int idx = std::atoi(name.c_str() + 1) - 1;
    if (idx < 0) return -1;
    if (head == 'x' && idx < nx) return x_index(idx);
    if (head == 'l' && idx < nlam) return lam_index(idx);
    return -1;
}

std::shared_ptr<const VarContext> VarContext::make_x(int nx) {
    return make(nx, {}, false, 0);
}

std::shared_ptr<const VarContext> VarContext::make(int nx, std::vector<Rat> lam_weights,
                                                   bool with_F, Rat F_weight) {
    auto c = std::make_shared<VarContext>();
    c->nx = nx;
    c->nlam = static_cast<int>(lam_weights.size());
    c->lam_weights = std::move(lam_weights);
    c->has_F = with_F;
    c->F_weight = std::move(F_weight);
    if (c->vars() > kMaxVars)
        fail(errc::invalid_argument, "too many variables (limit " + std::to_string(kMaxVars) + ")");
    return c;
}

// ---------------------------------------------------------------------------
// Term order

unsigned total_deg(const Expv& e) {
    unsigned s = 0;
    for (uint8_t x : e) s += x;
    return s;
}

int grlex_cmp(const Expv& a, const Expv& b) {
    unsigned da = total_deg(a), db = total_deg(b);
    if (da != db) return da < db ? -1 : 1;
    return std::memcmp(a.data(), b.data(), a.size());
}

namespace {

struct ExpvHash {
    size_t operator()(const Expv& e) const {
        // FNV-1a over the packed bytes
        size_t h = 1469598103934665603ull;
        for (uint8_t b : e) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }
};

void check_exp_range(const Expv& e) {
    (void)e;  // entries are uint8_t; overflow is checked at multiply sites
}

Expv add_exp(const Expv& a, const Expv& b) {
    Expv r{};
    for (size_t i = 0; i < r.size(); i++) {
        unsigned s = unsigned(a[i]) + unsigned(b[i]);
        if (s > VarContext::kMaxExp) fail(errc::domain_error, "exponent overflow");
        r[i] = static_cast<uint8_t>(s);
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Poly basics

void Poly::normalize() {
    std::sort(t_.begin(), t_.end(),
              [](const Term& a, const Term& b) { return grlex_cmp(a.exp, b.exp) < 0; });
    std::vector<Term> out;
    out.reserve(t_.size());
    for (auto& term : t_) {
        if (!out.empty() && grlex_cmp(out.back().exp, term.exp) == 0)
            out.back().c += term.c;
        else
            out.push_back(std::move(term));
        if (!out.empty() && out.back().c == 0) out.pop_back();
    }
    t_ = std::move(out);
}

Poly Poly::from_terms(CtxPtr ctx, std::vector<Term> terms) {
    Poly p(std::move(ctx));
    p.t_ = std::move(terms);
    p.normalize();
    return p;
}

Poly Poly::constant(CtxPtr ctx, const Rat& c) {
    Poly p(std::move(ctx));
    if (c != 0) p.t_.push_back({Expv{}, c});
    return p;
}

Poly Poly::variable(CtxPtr ctx, int v) {
    if (v < 0 || v >= ctx->vars()) fail(errc::internal_error, "variable index out of range");
    Expv e{};
    e[v] = 1;
    return monomial(std::move(ctx), e, 1);
}

Poly Poly::monomial(CtxPtr ctx, const Expv& e, const Rat& c) {
    Poly p(std::move(ctx));
    check_exp_range(e);
    if (c != 0) p.t_.push_back({e, c});
    return p;
}

bool Poly::operator==(const Poly& o) const {
    if (t_.size() != o.t_.size()) return false;
    for (size_t i = 0; i < t_.size(); i++)
        if (grlex_cmp(t_[i].exp, o.t_[i].exp) != 0 || t_[i].c != o.t_[i].c) return false;
    return true;
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& term : r.t_) term.c = -term.c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r(ctx_ ? ctx_ : o.ctx_);
    r.t_.reserve(t_.size() + o.t_.size());
    size_t i = 0, j = 0;
    while (i < t_.size() && j < o.t_.size()) {
        int c = grlex_cmp(t_[i].exp, o.t_[j].exp);
        if (c < 0)
            r.t_.push_back(t_[i++]);
        else if (c > 0)
            r.t_.push_back(o.t_[j++]);
        else {
            Rat s = t_[i].c + o.t_[j].c;
            if (s != 0) r.t_.push_back({t_[i].exp, std::move(s)});
            i++, j++;
        }
    }
    for (; i < t_.size(); i++) r.t_.push_back(t_[i]);
    for (; j < o.t_.size(); j++) r.t_.push_back(o.t_[j]);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly& Poly::operator+=(const Poly& o) {
    *this = *this + o;
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    *this = *this - o;
    return *this;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r(ctx_ ? ctx_ : o.ctx_);
    if (is_zero() || o.is_zero()) return r;
    std::unordered_map<Expv, Rat, ExpvHash> acc;
    acc.reserve(t_.size() * o.t_.size() / 2 + 4);
    for (const Term& a : t_)
        for (const Term& b : o.t_) {
            Rat prod = a.c * b.c;
            auto [it, fresh] = acc.try_emplace(add_exp(a.exp, b.exp), prod);
            if (!fresh) it->second += prod;
        }
    r.t_.reserve(acc.size());
    for (auto& [e, c] : acc)
        if (c != 0) r.t_.push_back({e, std::move(c)});
    std::sort(r.t_.begin(), r.t_.end(),
              [](const Term& a, const Term& b) { return grlex_cmp(a.exp, b.exp) < 0; });
    return r;
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly Poly::mul_rat(const Rat& c) const {
    if (c == 0) return Poly(ctx_);
    Poly r(*this);
    for (auto& term : r.t_) term.c *= c;
    return r;
}

Poly Poly::div_rat(const Rat& c) const {
    if (c == 0) fail(errc::invalid_argument, "division by zero");
    Poly r(*this);
    for (auto& term : r.t_) term.c /= c;
    return r;
}

Poly Poly::mul_term(const Expv& e, const Rat& c) const {
    if (c == 0) return Poly(ctx_);
    Poly r(ctx_);
    r.t_.reserve(t_.size());
    for (const Term& term : t_) r.t_.push_back({add_exp(term.exp, e), term.c * c});
    // multiplying by a fixed monomial preserves the term order
    return r;
}

Poly Poly::pow(unsigned k) const {
    Poly r = Poly::constant(ctx_, 1);
    Poly base(*this);
    while (k) {
        if (k & 1) r *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return r;
}

Poly Poly::derivative(int v) const {
    Poly r(ctx_);
    for (const Term& term : t_) {
        if (term.exp[v] == 0) continue;
        Expv e = term.exp;
        int k = e[v];
        e[v] = static_cast<uint8_t>(k - 1);
        r.t_.push_back({e, term.c * k});
    }
    r.normalize();
    return r;
}

Poly Poly::subst_var(int v, const Poly& value) const {
    // group by exponent of v, multiply by value^e
    std::map<int, std::vector<Term>> groups;
    for (const Term& term : t_) {
        Expv e = term.exp;
        int k = e[v];
        e[v] = 0;
        groups[k].push_back({e, term.c});
    }
    Poly result(ctx_);
    Poly power = Poly::constant(ctx_, 1);
    int cur = 0;
    for (auto& [k, terms] : groups) {
        while (cur < k) {
            power *= value;
            cur++;
        }
        result += Poly::from_terms(ctx_, std::move(terms)) * power;
    }
    return result;
}

Poly Poly::subst_var(int v, const Rat& value) const {
    PolyBuilder b(ctx_);
    for (const Term& term : t_) {
        Expv e = term.exp;
        int k = e[v];
        e[v] = 0;
        Rat c = term.c;
        for (int i = 0; i < k; i++) c *= value;
        b.add(e, c);
    }
    return b.build();
}

int Poly::degree_in(int v) const {
    int d = 0;
    for (const Term& term : t_) d = std::max(d, int(term.exp[v]));
    return d;
}

bool Poly::depends_on(int v) const {
    for (const Term& term : t_)
        if (term.exp[v] != 0) return true;
    return false;
}

Poly Poly::lift(const CtxPtr& target) const {
    if (ctx_ && target && *ctx_ == *target) {
        Poly r(*this);
        return r;
    }
    std::vector<int> map(ctx_->vars(), -1);
    for (int v = 0; v < ctx_->vars(); v++) map[v] = target->find_var(ctx_->var_name(v));
    Poly r(target);
    r.t_.reserve(t_.size());
    for (const Term& term : t_) {
        Expv e{};
        for (int v = 0; v < ctx_->vars(); v++) {
            if (term.exp[v] == 0) continue;
            if (map[v] < 0)
                fail(errc::invalid_argument,
                     "context lift: variable " + ctx_->var_name(v) + " missing in target");
            e[map[v]] = term.exp[v];
        }
        r.t_.push_back({e, term.c});
    }
    r.normalize();
    return r;
}

std::complex<double> Poly::eval(const std::vector<std::complex<double>>& at) const {
    std::complex<double> s = 0;
    for (const Term& term : t_) {
        std::complex<double> m = rat_double(term.c);
        for (int v = 0; v < ctx_->vars(); v++)
            for (int k = 0; k < term.exp[v]; k++) m *= at[v];
        s += m;
    }
    return s;
}

Rat Poly::eval_rat(const std::vector<Rat>& at) const {
    Rat s = 0;
    for (const Term& term : t_) {
        Rat m = term.c;
        for (int v = 0; v < ctx_->vars(); v++)
            for (int k = 0; k < term.exp[v]; k++) m *= at[v];
        s += m;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Exact division (single divisor, graded-lex leading terms)

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
    if (d.is_zero()) fail(errc::invalid_argument, "division by zero polynomial");
    if (is_zero()) return Poly(ctx_);
    const Term& lead = d.t_.back();

    // working remainder keyed descending so the leading term is begin()
    struct Desc {
        bool operator()(const Expv& a, const Expv& b) const { return grlex_cmp(a, b) > 0; }
    };
    std::map<Expv, Rat, Desc> rem;
    for (const Term& term : t_) rem.emplace(term.exp, term.c);

    std::vector<Term> quot;
    while (!rem.empty()) {
        auto it = rem.begin();
        Expv e = it->first;
        Rat c = it->second;
        // divisibility of the leading monomial
        Expv q{};
        bool ok = true;
        for (size_t v = 0; v < e.size(); v++) {
            if (e[v] < lead.exp[v]) {
                ok = false;
                break;
            }
            q[v] = static_cast<uint8_t>(e[v] - lead.exp[v]);
        }
        if (!ok) return std::nullopt;
        Rat qc = c / lead.c;
        quot.push_back({q, qc});
        for (const Term& dt : d.t_) {
            Expv k = add_exp(dt.exp, q);
            auto [jt, fresh] = rem.try_emplace(k, Rat(0));
            jt->second -= qc * dt.c;
            if (jt->second == 0) rem.erase(jt);
        }
    }
    return Poly::from_terms(ctx_, std::move(quot));
}

// ---------------------------------------------------------------------------
// PolyBuilder

void PolyBuilder::add(const Expv& e, const Rat& c) {
    if (c != 0) buf_.push_back({e, c});
}

void PolyBuilder::add(const Poly& p) {
    for (const Term& t : p.terms()) buf_.push_back(t);
}

void PolyBuilder::add_scaled(const Poly& p, const Rat& c) {
    if (c == 0) return;
    for (const Term& t : p.terms()) buf_.push_back({t.exp, t.c * c});
}

Poly PolyBuilder::build() { return Poly::from_terms(ctx_, std::move(buf_)); }

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_mono(std::ostream& os, const VarContext& ctx, const Expv& e, bool& printed_factor) {
    for (int v = 0; v < ctx.vars(); v++) {
        if (e[v] == 0) continue;
        if (printed_factor) os << "*";
        os << ctx.var_name(v);
        if (e[v] > 1) os << "^" << int(e[v]);
        printed_factor = true;
    }
}

}  // namespace

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    // print leading (grlex-largest) terms first
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const Term& term = *it;
        bool first = it == t_.rbegin();
        Rat a = term.c;
        if (a < 0) {
            os << (first ? "-" : " - ");
            a = -a;
        } else if (!first) {
            os << " + ";
        }
        bool unit_coef = (a == 1) && total_deg(term.exp) > 0;
        bool printed = false;
        if (!unit_coef) {
            os << rat_str(a);
            printed = true;
        }
        print_mono(os, *ctx_, term.exp, printed);
    }
    return os.str();
}

std::string Poly::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Term& term : t_) {
        nlohmann::ordered_json rec;
        std::vector<int> exps;
        for (int v = 0; v < ctx_->vars(); v++) exps.push_back(term.exp[v]);
        rec["exp"] = exps;
        rec["coef"] = rat_str(term.c);
        arr.push_back(rec);
    }
    return arr.dump();
}

Poly Poly::from_json(CtxPtr ctx, const std::string& json_text) {
    auto arr = nlohmann::json::parse(json_text);
    std::vector<Term> terms;
    for (const auto& rec : arr) {
        Expv e{};
        const auto& exps = rec.at("exp");
        if (int(exps.size()) != ctx->vars())
            fail(errc::parse_error, "exponent vector length mismatch");
        for (size_t v = 0; v < exps.size(); v++) {
            int k = exps[v].get<int>();
            if (k < 0 || k > VarContext::kMaxExp) fail(errc::parse_error, "exponent out of range");
            e[v] = static_cast<uint8_t>(k);
        }
        terms.push_back({e, rat_parse(rec.at("coef").get<std::string>())});
    }
    return Poly::from_terms(std::move(ctx), std::move(terms));
}

// ---------------------------------------------------------------------------
// Parser
//
// expr    := ['+'|'-'] term (('+'|'-') term)*
// term    := factor ('*' factor)*
// factor  := primary ['^' nat]
// primary := number | var | '(' expr ')'
// number  := nat ['/' nat]

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    CtxPtr ctx;

    explicit Parser(const std::string& text, CtxPtr c) : s(text), ctx(std::move(c)) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            pos++;
            return true;
        }
        return false;
    }

    [[noreturn]] void err(const std::string& msg) {
        fail(errc::parse_error, msg + " at position " + std::to_string(pos), long(pos));
    }

    std::string read_number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) pos++;
        if (pos == start) err("expected number");
        return s.substr(start, pos - start);
    }

    Poly primary() {
        skip_ws();
        if (pos >= s.size()) err("unexpected end of input");
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = read_number();
            if (accept('/')) {
                std::string den = read_number();
                return Poly::constant(ctx, rat_parse(num + "/" + den));
            }
            return Poly::constant(ctx, rat_parse(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos;
            pos++;
            while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) pos++;
            std::string name = s.substr(start, pos - start);
            int v = ctx->find_var(name);
            if (v < 0) {
                pos = start;
                err("unknown variable '" + name + "'");
            }
            return Poly::variable(ctx, v);
        }
        if (accept('(')) {
            Poly e = expr();
            if (!accept(')')) err("expected ')'");
            return e;
        }
        err(std::string("unexpected character '") + c + "'");
    }

    Poly factor() {
        Poly base = primary();
        if (accept('^')) {
            std::string num = read_number();
            long k = std::stol(num);
            if (k < 0 || k > VarContext::kMaxExp) err("exponent out of range");
            return base.pow(unsigned(k));
        }
        return base;
    }

    Poly term() {
        Poly p = factor();
        while (accept('*')) p *= factor();
        return p;
    }

    Poly expr() {
        bool neg = false;
        skip_ws();
        if (accept('-'))
            neg = true;
        else
            accept('+');
        Poly p = term();
        if (neg) p = -p;
        while (true) {
            skip_ws();
            if (accept('+'))
                p += term();
            else if (accept('-'))
                p -= term();
            else
                break;
        }
        return p;
    }
};

}  // namespace

Poly Poly::parse(CtxPtr ctx, const std::string& text) {
    Parser p(text, ctx);
    Poly result = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.err("trailing input");
    return result;
}

}  // namespace pfaff

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfaff/context.hpp"
#include "pfaff/rat.hpp"

namespace pfaff {

/// Packed exponent vector. Entries beyond ctx->vars() are zero.
using Expv = std::array<uint8_t, VarContext::kMaxVars>;

struct Term {
    Expv exp{};
    Rat c;
};

/// Exact sparse multivariate polynomial over Q with a fixed variable
/// context. Terms are kept in ascending graded-lex order (total degree,
/// then lexicographic with x_1 most significant) with no zero coefficients,
/// which makes printing, hashing and iteration deterministic.
class Poly {
public:
    Poly() = default;
    explicit Poly(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    static Poly zero(CtxPtr ctx) { return Poly(std::move(ctx)); }
    static Poly constant(CtxPtr ctx, const Rat& c);
    static Poly variable(CtxPtr ctx, int v);
    static Poly monomial(CtxPtr ctx, const Expv& e, const Rat& c);

    const CtxPtr& ctx() const { return ctx_; }
    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);

    Poly mul_rat(const Rat& c) const;
    Poly div_rat(const Rat& c) const;
    Poly mul_term(const Expv& e, const Rat& c) const;
    Poly pow(unsigned k) const;

    Poly derivative(int v) const;

    /// Substitute variable v by a polynomial value (same context).
    Poly subst_var(int v, const Poly& value) const;
    /// Substitute variable v by a rational constant.
    Poly subst_var(int v, const Rat& value) const;

    /// Largest exponent of variable v across terms (0 for the zero poly).
    int degree_in(int v) const;
    bool depends_on(int v) const;

    /// Reinterpret this polynomial in a larger context. Variables are mapped
    /// by name; fails if a variable of this context is missing in `target`.
    Poly lift(const CtxPtr& target) const;

    /// Evaluate at a complex point (one value per context variable).
    std::complex<double> eval(const std::vector<std::complex<double>>& at) const;
    Rat eval_rat(const std::vector<Rat>& at) const;

    /// Exact single-divisor division: returns quotient iff d divides this
    /// exactly, std::nullopt otherwise. Division is with respect to the
    /// graded-lex order.
    std::optional<Poly> divide_exact(const Poly& d) const;
    bool divisible_by(const Poly& d) const { return bool(divide_exact(d)); }

    std::string to_string() const;
    std::string to_json() const;

    static Poly parse(CtxPtr ctx, const std::string& text);
    static Poly from_json(CtxPtr ctx, const std::string& json_text);

    /// Internal: adopt sorted/combined term list.
    static Poly from_terms(CtxPtr ctx, std::vector<Term> terms);

private:
    CtxPtr ctx_;
    std::vector<Term> t_;

    void normalize();
    friend class PolyBuilder;
};

/// Ascending graded-lex comparison of exponent vectors.
int grlex_cmp(const Expv& a, const Expv& b);
unsigned total_deg(const Expv& e);

/// Accumulating builder used by hot loops; collects (exp, coef) pairs and
/// emits a normalized Poly.
class PolyBuilder {
public:
    explicit PolyBuilder(CtxPtr ctx) : ctx_(std::move(ctx)) {}
    void add(const Expv& e, const Rat& c);
    void add(const Poly& p);
    void add_scaled(const Poly& p, const Rat& c);
    Poly build();

private:
    CtxPtr ctx_;
    std::vector<Term> buf_;
};

}  // namespace pfaff

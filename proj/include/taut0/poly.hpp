#pragma once

#include <map>
#include <string>
#include <vector>

#include "taut0/context.hpp"
#include "taut0/rational.hpp"

// Coefficient polynomials for boundary sums: exact-rational polynomials in
// the per-symbol side degrees.  Stored in a reduced normal form that makes
// two polynomials structurally equal exactly when they agree as functions
// on splitting indices:
//   - only the primed variables x'(D) survive; x''(D) enters as e - x'(D),
//   - section variables are idempotent (their values are 0 or 1), so their
//     exponents are clamped to 1,
//   - the canonical symbol has no variable at all: x'(omega) and x''(omega)
//     are the constant -1, its per-side degree on a two-sided splitting.
// The normal form is what lets relation derivations close symbolically:
// identities like x'(D) + x''(D) = e or x'(s)^2 = x'(s) hold on the nose.

namespace taut0 {

class CoeffPoly {
public:
    explicit CoeffPoly(const Context& ctx) : ctx_(&ctx) {}

    const Context& ctx() const { return *ctx_; }

    static CoeffPoly constant(const Context& ctx, const Rat& c) {
        CoeffPoly p(ctx);
        p.add_term(std::vector<int>(ctx.coords(), 0), c);
        return p;
    }

    // x'(symbol): the degree of the symbol on the first side.
    static CoeffPoly prime(const Context& ctx, int symbol) {
        if (ctx.is_omega(symbol)) return constant(ctx, -1);
        CoeffPoly p(ctx);
        std::vector<int> exps(ctx.coords(), 0);
        exps[symbol] = 1;
        p.add_term(exps, 1);
        return p;
    }

    // x''(symbol) = degree(symbol) - x'(symbol).
    static CoeffPoly dprime(const Context& ctx, int symbol) {
        if (ctx.is_omega(symbol)) return constant(ctx, -1);
        return constant(ctx, ctx.degree(symbol)) - prime(ctx, symbol);
    }

    bool is_zero() const { return m_.empty(); }

    // Whether the first stored term is negative.  Renderers use this to pull
    // a minus sign out of a polynomial slot instead of printing "+ - ...".
    bool leading_negative() const { return !m_.empty() && m_.begin()->second < 0; }
    bool operator==(const CoeffPoly& o) const { return ctx_ == o.ctx_ && m_ == o.m_; }

    CoeffPoly& operator+=(const CoeffPoly& o) {
        check_same(o);
        for (const auto& [e, c] : o.m_) add_term(e, c);
        return *this;
    }
    CoeffPoly& operator-=(const CoeffPoly& o) {
        check_same(o);
        for (const auto& [e, c] : o.m_) add_term(e, -c);
        return *this;
    }
    CoeffPoly& operator*=(const Rat& s) {
        if (s == 0) {
            m_.clear();
            return *this;
        }
        for (auto& [e, c] : m_) c *= s;
        return *this;
    }
    friend CoeffPoly operator+(CoeffPoly a, const CoeffPoly& b) { return a += b; }
    friend CoeffPoly operator-(CoeffPoly a, const CoeffPoly& b) { return a -= b; }
    friend CoeffPoly operator*(const Rat& s, CoeffPoly a) { return a *= s; }
    friend CoeffPoly operator-(CoeffPoly a) { return a *= Rat(-1); }

    friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
        a.check_same(b);
        CoeffPoly out(*a.ctx_);
        for (const auto& [ea, ca] : a.m_)
            for (const auto& [eb, cb] : b.m_) {
                std::vector<int> e(ea);
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    CoeffPoly pow(unsigned k) const {
        CoeffPoly out = constant(*ctx_, 1);
        for (unsigned i = 0; i < k; ++i) out = out * (*this);
        return out;
    }

    Rat eval(const std::vector<long>& primed) const {
        Rat total = 0;
        for (const auto& [e, c] : m_) {
            Rat term = c;
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) term *= primed[i];
            total += term;
        }
        return total;
    }

    // The swap substitution x'(D) -> e_D - x'(D) for every coordinate.
    CoeffPoly swapped() const {
        CoeffPoly out(*ctx_);
        for (const auto& [e, c] : m_) {
            CoeffPoly term = constant(*ctx_, c);
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) term = term * dprime(*ctx_, (int)i).pow(e[i]);
            out += term;
        }
        return out;
    }

    CoeffPoly symmetrized() const {
        CoeffPoly s = *this + swapped();
        s *= Rat(1, 2);
        return s;
    }

    bool swap_symmetric() const { return *this == swapped(); }

    std::string render() const {
        if (m_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : m_) {
            Rat a = c;
            if (first) {
                if (a < 0) {
                    out += "- ";
                    a = -a;
                }
            } else {
                out += (a < 0) ? " - " : " + ";
                if (a < 0) a = -a;
            }
            first = false;
            std::string vars;
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!vars.empty()) vars += ' ';
                vars += "x'(" + ctx_->sym((int)i).name + ")";
                if (e[i] > 1) vars += "^" + std::to_string(e[i]);
            }
            if (vars.empty())
                out += rat_str(a);
            else if (a == 1)
                out += vars;
            else
                out += rat_str(a) + " " + vars;
        }
        return out;
    }

    static CoeffPoly parse(const Context& ctx, const std::string& text);

private:
    const Context* ctx_;
    std::map<std::vector<int>, Rat> m_;

    void check_same(const CoeffPoly& o) const {
        if (ctx_ != o.ctx_) throw input_error("polynomials from different contexts");
    }

    void add_term(std::vector<int> e, const Rat& c) {
        if (c == 0) return;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 1 && ctx_->is_section((int)i)) e[i] = 1;  // values are 0/1
        auto it = m_.find(e);
        if (it == m_.end()) {
            m_.emplace(std::move(e), c);
        } else {
            it->second += c;
            if (it->second == 0) m_.erase(it);
        }
    }
};

namespace detail {

// Shared by the polynomial and expression parsers: a tiny cursor with
// descriptive failures.
struct TextCursor {
    const std::string& s;
    size_t i = 0;

    explicit TextCursor(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    bool peek(const std::string& tok) {
        skip_ws();
        return s.compare(i, tok.size(), tok) == 0;
    }
    bool eat(const std::string& tok) {
        if (!peek(tok)) return false;
        i += tok.size();
        return true;
    }
    void expect(const std::string& tok) {
        if (!eat(tok)) fail("expected '" + tok + "'");
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw input_error(msg + " at position " + std::to_string(i) + " in '" + s + "'");
    }
    std::string ident() {
        skip_ws();
        size_t b = i;
        while (i < s.size() && (isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
        if (i == b) fail("expected a name");
        return s.substr(b, i - b);
    }
    bool peek_digit() {
        skip_ws();
        return i < s.size() && isdigit((unsigned char)s[i]);
    }
    long integer() {
        skip_ws();
        size_t b = i;
        while (i < s.size() && isdigit((unsigned char)s[i])) ++i;
        if (i == b) fail("expected an integer");
        return std::stol(s.substr(b, i - b));
    }
    Rat rational() {
        Rat num(integer());
        if (eat("/")) {
            Rat den(integer());
            if (den == 0) fail("zero denominator");
            num /= den;
        }
        return num;
    }
};

inline CoeffPoly parse_poly_expr(const Context& ctx, TextCursor& cur);

inline CoeffPoly parse_poly_atom(const Context& ctx, TextCursor& cur) {
    if (cur.eat("(")) {
        CoeffPoly p = parse_poly_expr(ctx, cur);
        cur.expect(")");
        return p;
    }
    if (cur.eat("x''(")) {
        std::string name = cur.ident();
        cur.expect(")");
        return CoeffPoly::dprime(ctx, ctx.require(name));
    }
    if (cur.eat("x'(")) {
        std::string name = cur.ident();
        cur.expect(")");
        return CoeffPoly::prime(ctx, ctx.require(name));
    }
    if (cur.peek_digit()) return CoeffPoly::constant(ctx, cur.rational());
    cur.fail("expected a constant, x'(name), x''(name), or parenthesized term");
}

inline CoeffPoly parse_poly_factor(const Context& ctx, TextCursor& cur) {
    CoeffPoly p = parse_poly_atom(ctx, cur);
    if (cur.eat("^")) {
        long k = cur.integer();
        if (k < 0) cur.fail("negative exponent");
        p = p.pow((unsigned)k);
    }
    return p;
}

inline bool poly_term_starts(TextCursor& cur) {
    return cur.peek("(") || cur.peek("x'") || cur.peek_digit();
}

inline CoeffPoly parse_poly_term(const Context& ctx, TextCursor& cur) {
    CoeffPoly p = parse_poly_factor(ctx, cur);
    for (;;) {
        if (cur.eat("*")) {
            p = p * parse_poly_factor(ctx, cur);
        } else if (poly_term_starts(cur)) {
            p = p * parse_poly_factor(ctx, cur);  // juxtaposition
        } else {
            return p;
        }
    }
}

inline CoeffPoly parse_poly_expr(const Context& ctx, TextCursor& cur) {
    bool neg = false;
    if (cur.eat("-"))
        neg = true;
    else
        cur.eat("+");
    CoeffPoly p = parse_poly_term(ctx, cur);
    if (neg) p *= Rat(-1);
    for (;;) {
        if (cur.eat("+"))
            p += parse_poly_term(ctx, cur);
        else if (cur.eat("-"))
            p -= parse_poly_term(ctx, cur);
        else
            return p;
    }
}

}  // namespace detail

inline CoeffPoly CoeffPoly::parse(const Context& ctx, const std::string& text) {
    detail::TextCursor cur(text);
    CoeffPoly p = detail::parse_poly_expr(ctx, cur);
    if (!cur.done()) cur.fail("unexpected trailing input");
    return p;
}

}  // namespace taut0

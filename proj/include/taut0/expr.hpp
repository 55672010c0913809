#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "taut0/context.hpp"
#include "taut0/errors.hpp"
#include "taut0/poly.hpp"
#include "taut0/rational.hpp"
#include "taut0/split.hpp"

// Divisor-class expressions on the two spaces of a one-dimensional family:
// BaseExpr lives on the base of the fibration, CurveExpr on its total space.
// Both are rational linear combinations of a small set of atoms, kept in a
// canonical form at all times, so structural equality is class equality.
//
// The canonical form folds everything foldable:
//   - pushforward atoms are merged by sorted key, zero coefficients dropped;
//   - a scalar times a boundary sum is absorbed into its coefficient
//     polynomial, so each expression carries at most one sum per flavor;
//   - ordered boundary sums over a context with sections rewrite to the
//     unordered sum of f + f∘swap (no splitting is swap-fixed once a section
//     is present), and with no sections the stored polynomial is
//     symmetrized, which is exactly the information the sum depends on;
//   - pi^* is linear, so a CurveExpr carries one pulled-back BaseExpr.

namespace taut0 {

// A rational combination of tracked symbols, used wherever a divisor
// argument may be a formal sum (polarization-style identities need them).
class SymCombo {
public:
    explicit SymCombo(const Context& ctx) : ctx_(&ctx) {}

    static SymCombo of(const Context& ctx, int symbol) {
        ctx.sym(symbol);  // range check
        SymCombo c(ctx);
        c.parts_[symbol] = 1;
        return c;
    }
    static SymCombo named(const Context& ctx, const std::string& name) {
        return of(ctx, ctx.require(name));
    }

    const Context& ctx() const { return *ctx_; }
    const std::map<int, Rat>& parts() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }

    // Total relative degree of the combination.
    Rat degree() const {
        Rat d = 0;
        for (const auto& [s, c] : parts_) d += c * ctx_->degree(s);
        return d;
    }

    SymCombo& operator+=(const SymCombo& o) {
        for (const auto& [s, c] : o.parts_) {
            Rat& v = parts_[s];
            v += c;
            if (v == 0) parts_.erase(s);
        }
        return *this;
    }
    SymCombo& operator-=(const SymCombo& o) { return *this += -1 * o; }
    SymCombo& operator*=(const Rat& k) {
        if (k == 0) {
            parts_.clear();
            return *this;
        }
        for (auto& [s, c] : parts_) c *= k;
        return *this;
    }
    friend SymCombo operator+(SymCombo a, const SymCombo& b) { return a += b; }
    friend SymCombo operator-(SymCombo a, const SymCombo& b) { return a -= b; }
    friend SymCombo operator*(const Rat& k, SymCombo a) { return a *= k; }

private:
    const Context* ctx_;
    std::map<int, Rat> parts_;
};

// First-side degree of a combination as a coefficient polynomial.
inline CoeffPoly prime_poly(const SymCombo& D) {
    CoeffPoly p(D.ctx());
    for (const auto& [s, c] : D.parts()) p += c * CoeffPoly::prime(D.ctx(), s);
    return p;
}

// Second-side degree, the swap of the above.
inline CoeffPoly dprime_poly(const SymCombo& D) {
    CoeffPoly p(D.ctx());
    for (const auto& [s, c] : D.parts()) p += c * CoeffPoly::dprime(D.ctx(), s);
    return p;
}

enum class BaseAtomKind { c2push, pushpp, sectpull, boundary };

struct BaseAtom {
    BaseAtomKind kind = BaseAtomKind::c2push;
    int a = -1;      // pushpp: smaller symbol; sectpull: marking
    int b = -1;      // pushpp: larger symbol; sectpull: pulled symbol
    SplitIndex idx;  // boundary only
    auto operator<=>(const BaseAtom&) const = default;
};

class BaseExpr {
public:
    explicit BaseExpr(const Context& ctx) : ctx_(&ctx), usum_(ctx), osum_(ctx) {}

    const Context& ctx() const { return *ctx_; }

    static BaseExpr zero(const Context& ctx) { return BaseExpr(ctx); }

    // pi_*(a.b).  Two of the possible pairs are not new classes: distinct
    // disjoint sections have empty intersection, and a section against a
    // non-canonical symbol is the pullback of that symbol along the section.
    static BaseExpr push_pp(const Context& ctx, int a, int b) {
        ctx.sym(a);
        ctx.sym(b);
        if (a > b) std::swap(a, b);
        if (ctx.is_section(a) && ctx.is_section(b) && a != b && ctx.disjoint_sections)
            return zero(ctx);
        if (ctx.is_section(a) && !ctx.is_section(b) && !ctx.is_omega(b))
            return sect_pull(ctx, ctx.sym(a).marking, b);
        BaseExpr e(ctx);
        e.terms_[{BaseAtomKind::pushpp, a, b, {}}] = 1;
        return e;
    }

    static BaseExpr push_pp(const Context& ctx, const SymCombo& A, const SymCombo& B) {
        BaseExpr e(ctx);
        for (const auto& [sa, ca] : A.parts())
            for (const auto& [sb, cb] : B.parts()) e += ca * cb * push_pp(ctx, sa, sb);
        return e;
    }

    // s_i^*(symbol).  The canonical symbol pulls back trivially along a
    // section, leaving the conormal contribution -pi_*(s_i.s_i); a section
    // pulled along itself is its self-intersection; a disjoint other
    // section pulls back to nothing.
    static BaseExpr sect_pull(const Context& ctx, int i, int symbol) {
        int si = ctx.section(i);
        if (ctx.is_omega(symbol)) return Rat(-1) * push_pp(ctx, si, si);
        if (ctx.is_section(symbol)) {
            if (symbol == si) return push_pp(ctx, si, si);
            if (ctx.disjoint_sections) return zero(ctx);
            BaseExpr e(ctx);
            e.terms_[{BaseAtomKind::pushpp, std::min(si, symbol), std::max(si, symbol), {}}] = 1;
            return e;
        }
        BaseExpr e(ctx);
        e.terms_[{BaseAtomKind::sectpull, i, symbol, {}}] = 1;
        return e;
    }

    static BaseExpr sect_pull(const Context& ctx, int i, const SymCombo& D) {
        BaseExpr e(ctx);
        for (const auto& [s, c] : D.parts()) e += c * sect_pull(ctx, i, s);
        return e;
    }

    static BaseExpr c2_push(const Context& ctx) {
        BaseExpr e(ctx);
        e.terms_[{BaseAtomKind::c2push, -1, -1, {}}] = 1;
        return e;
    }

    // A single boundary class.  The index is canonicalized; in stable mode
    // an index naming an impossible degeneration is the zero class.
    static BaseExpr boundary(const Context& ctx, const SplitIndex& idx) {
        validate_index(ctx, idx);
        SplitIndex can = canonicalize(ctx, idx);
        if (!detail::passes_stability(ctx, can)) return zero(ctx);
        BaseExpr e(ctx);
        e.terms_[{BaseAtomKind::boundary, -1, -1, can}] = 1;
        return e;
    }

    // A formal boundary sum with coefficient polynomial P.  Unordered sums
    // need a swap-symmetric P outright.  Ordered sums over a context with
    // sections are the unordered sums of P + P∘swap; without sections the
    // symmetrization of P is stored, which determines every evaluation.
    static BaseExpr boundary_sum(const Context& ctx, const CoeffPoly& P, Convention conv) {
        if (&P.ctx() != &ctx) throw input_error("coefficient polynomial belongs to another context");
        BaseExpr e(ctx);
        if (conv == Convention::unordered) {
            if (!P.swap_symmetric())
                throw input_error(
                    "unordered boundary sum needs a swap-symmetric coefficient; "
                    "f(e',e'') must equal f(e'',e')");
            e.usum_ = P;
        } else if (ctx.r() > 0) {
            e.usum_ = P + P.swapped();
        } else {
            e.osum_ = P.symmetrized();
        }
        return e;
    }

    const std::map<BaseAtom, Rat>& terms() const { return terms_; }
    const CoeffPoly& unordered_sum() const { return usum_; }
    const CoeffPoly& ordered_sum() const { return osum_; }

    bool is_zero() const { return terms_.empty() && usum_.is_zero() && osum_.is_zero(); }

    bool operator==(const BaseExpr& o) const {
        return ctx_ == o.ctx_ && terms_ == o.terms_ && usum_ == o.usum_ && osum_ == o.osum_;
    }

    BaseExpr& operator+=(const BaseExpr& o) {
        check_same(o);
        for (const auto& [k, c] : o.terms_) {
            Rat& v = terms_[k];
            v += c;
            if (v == 0) terms_.erase(k);
        }
        usum_ += o.usum_;
        osum_ += o.osum_;
        return *this;
    }
    BaseExpr& operator-=(const BaseExpr& o) { return *this += Rat(-1) * o; }
    BaseExpr& operator*=(const Rat& k) {
        if (k == 0) {
            terms_.clear();
            usum_ = CoeffPoly(*ctx_);
            osum_ = CoeffPoly(*ctx_);
            return *this;
        }
        for (auto& [key, c] : terms_) c *= k;
        usum_ *= k;
        osum_ *= k;
        return *this;
    }
    friend BaseExpr operator+(BaseExpr a, const BaseExpr& b) { return a += b; }
    friend BaseExpr operator-(BaseExpr a, const BaseExpr& b) { return a -= b; }
    friend BaseExpr operator*(const Rat& k, BaseExpr a) { return a *= k; }
    friend BaseExpr operator-(BaseExpr a) { return a *= Rat(-1); }

    // Replaces the formal sums by their finite expansions over the
    // context's splitting indices.  Needs bounded effectivity.
    BaseExpr expanded() const {
        BaseExpr out(*ctx_);
        out.terms_ = terms_;
        auto add = [&](const std::map<SplitIndex, Rat>& coeffs) {
            for (const auto& [idx, c] : coeffs)
                if (c != 0) out += c * boundary(*ctx_, idx);
        };
        if (!usum_.is_zero()) add(expand_sum(*ctx_, usum_, Convention::unordered));
        if (!osum_.is_zero()) add(expand_sum(*ctx_, osum_, Convention::ordered));
        return out;
    }

    bool leading_negative() const {
        if (!terms_.empty()) return terms_.begin()->second < 0;
        if (!usum_.is_zero()) return usum_.leading_negative();
        return osum_.leading_negative();
    }

    std::string render() const;
    static BaseExpr parse(const Context& ctx, const std::string& text);

private:
    void check_same(const BaseExpr& o) const {
        if (ctx_ != o.ctx_) throw input_error("expressions belong to different contexts");
    }

    const Context* ctx_;
    std::map<BaseAtom, Rat> terms_;
    CoeffPoly usum_;  // unordered boundary sum, swap-symmetric
    CoeffPoly osum_;  // ordered boundary sum, sections-free contexts only

    friend class CurveExpr;
};

enum class CurveAtomKind { sym, omega, tilde };

struct CurveAtom {
    CurveAtomKind kind = CurveAtomKind::sym;
    int s = -1;      // sym only
    SplitIndex idx;  // tilde only; ordered, both orientations are distinct classes
    auto operator<=>(const CurveAtom&) const = default;
};

class CurveExpr {
public:
    explicit CurveExpr(const Context& ctx) : ctx_(&ctx), pull_(ctx), tsum_(ctx) {}

    const Context& ctx() const { return *ctx_; }

    static CurveExpr zero(const Context& ctx) { return CurveExpr(ctx); }

    static CurveExpr sym(const Context& ctx, int symbol) {
        ctx.sym(symbol);
        CurveExpr e(ctx);
        if (ctx.is_omega(symbol))
            e.terms_[{CurveAtomKind::omega, -1, {}}] = 1;
        else
            e.terms_[{CurveAtomKind::sym, symbol, {}}] = 1;
        return e;
    }

    static CurveExpr sym(const Context& ctx, const SymCombo& D) {
        CurveExpr e(ctx);
        for (const auto& [s, c] : D.parts()) e += c * sym(ctx, s);
        return e;
    }

    static CurveExpr omega(const Context& ctx) { return sym(ctx, ctx.omega()); }

    static CurveExpr base_pull(const Context& ctx, const BaseExpr& x) {
        if (&x.ctx() != &ctx) throw input_error("expressions belong to different contexts");
        CurveExpr e(ctx);
        e.pull_ = x;
        return e;
    }

    // A single boundary class upstairs.  The index is ordered: the two
    // orientations sit over the same base class but are different classes
    // here, so no canonicalization applies.  Stability still prunes.
    static CurveExpr tilde(const Context& ctx, const SplitIndex& idx) {
        validate_index(ctx, idx);
        if (!detail::passes_stability(ctx, idx)) return zero(ctx);
        CurveExpr e(ctx);
        e.terms_[{CurveAtomKind::tilde, -1, idx}] = 1;
        return e;
    }

    // Formal sum of upstairs boundary classes.  The ordered flavor runs
    // over all splitting sequences and keeps P as is; the unordered flavor
    // only makes sense for swap-symmetric P, where it equals the ordered
    // sum, so one canonical slot serves both.
    static CurveExpr tilde_sum(const Context& ctx, const CoeffPoly& P, Convention conv) {
        if (&P.ctx() != &ctx) throw input_error("coefficient polynomial belongs to another context");
        if (conv == Convention::unordered && !P.swap_symmetric())
            throw input_error(
                "unordered boundary sum needs a swap-symmetric coefficient; "
                "f(e',e'') must equal f(e'',e')");
        CurveExpr e(ctx);
        e.tsum_ = P;
        return e;
    }

    const std::map<CurveAtom, Rat>& terms() const { return terms_; }
    const BaseExpr& pulled() const { return pull_; }
    const CoeffPoly& tilde_coeff() const { return tsum_; }

    bool is_zero() const { return terms_.empty() && pull_.is_zero() && tsum_.is_zero(); }

    bool has_tilde() const {
        if (!tsum_.is_zero()) return true;
        for (const auto& [k, c] : terms_)
            if (k.kind == CurveAtomKind::tilde) return true;
        return false;
    }

    bool operator==(const CurveExpr& o) const {
        return ctx_ == o.ctx_ && terms_ == o.terms_ && pull_ == o.pull_ && tsum_ == o.tsum_;
    }

    CurveExpr& operator+=(const CurveExpr& o) {
        if (ctx_ != o.ctx_) throw input_error("expressions belong to different contexts");
        for (const auto& [k, c] : o.terms_) {
            Rat& v = terms_[k];
            v += c;
            if (v == 0) terms_.erase(k);
        }
        pull_ += o.pull_;
        tsum_ += o.tsum_;
        return *this;
    }
    CurveExpr& operator-=(const CurveExpr& o) { return *this += Rat(-1) * o; }
    CurveExpr& operator*=(const Rat& k) {
        if (k == 0) {
            terms_.clear();
            pull_ = BaseExpr(*ctx_);
            tsum_ = CoeffPoly(*ctx_);
            return *this;
        }
        for (auto& [key, c] : terms_) c *= k;
        pull_ *= k;
        tsum_ *= k;
        return *this;
    }
    friend CurveExpr operator+(CurveExpr a, const CurveExpr& b) { return a += b; }
    friend CurveExpr operator-(CurveExpr a, const CurveExpr& b) { return a -= b; }
    friend CurveExpr operator*(const Rat& k, CurveExpr a) { return a *= k; }
    friend CurveExpr operator-(CurveExpr a) { return a *= Rat(-1); }

    std::string render() const;
    static CurveExpr parse(const Context& ctx, const std::string& text);

private:
    const Context* ctx_;
    std::map<CurveAtom, Rat> terms_;
    BaseExpr pull_;   // pi^* of a base class, coefficient folded inside
    CoeffPoly tsum_;  // ordered sum of tilde boundary classes

    friend BaseExpr push_product(const CurveExpr&, const CurveExpr&);
    friend BaseExpr sect_pull(int, const CurveExpr&);
};

// Expressions are canonical by construction; exposed for API symmetry.
inline BaseExpr normalize(BaseExpr e) { return e; }
inline CurveExpr normalize(CurveExpr e) { return e; }

namespace detail {

// Degree of a sym/omega atom, total and on the primed side of an index.
inline long atom_total_degree(const Context& ctx, const CurveAtom& a) {
    return a.kind == CurveAtomKind::omega ? -2 : ctx.degree(a.s);
}
inline long atom_primed_degree(const CurveAtom& a, const SplitIndex& idx) {
    return a.kind == CurveAtomKind::omega ? -1 : idx.dp[a.s];
}

}  // namespace detail

// Pushforward of a product of two total-space classes down to the base.
// Bilinear over the supported monomials:
//   symbol . symbol          -> pi_*(a.b)
//   symbol . pi^*(x)         -> deg(symbol) x
//   pi^*(x) . pi^*(y)        -> 0          (fiber dimension)
//   pi^*(x) . tilde class    -> 0          (tilde classes have degree 0)
//   symbol . tilde class     -> primed-side degree times the base class,
//                               total degree on a swap-fixed index (the
//                               symbol then meets both halves)
// A product of two tilde classes is out of range.
inline BaseExpr push_product(const CurveExpr& A, const CurveExpr& B) {
    const Context& ctx = A.ctx();
    if (&B.ctx() != &ctx) throw input_error("expressions belong to different contexts");
    if (A.has_tilde() && B.has_tilde())
        throw fragment_error(
            "outside supported fragment: product of two boundary classes on the total space");

    BaseExpr out(ctx);
    auto one_side = [&](const CurveExpr& P, const CurveExpr& Q) {
        // sym-like atoms of P against everything in Q except sym-like atoms
        // (those pairs are handled symmetrically below).
        for (const auto& [ka, ca] : P.terms_) {
            if (ka.kind == CurveAtomKind::tilde) continue;
            if (!Q.pull_.is_zero())
                out += ca * detail::atom_total_degree(ctx, ka) * Q.pull_;
            for (const auto& [kb, cb] : Q.terms_) {
                if (kb.kind != CurveAtomKind::tilde) continue;
                long d = is_diagonal(ctx, kb.idx)
                             ? detail::atom_total_degree(ctx, ka)
                             : detail::atom_primed_degree(ka, kb.idx);
                out += ca * cb * d * BaseExpr::boundary(ctx, kb.idx);
            }
            if (!Q.tsum_.is_zero()) {
                CoeffPoly px = ka.kind == CurveAtomKind::omega
                                   ? CoeffPoly::constant(ctx, -1)
                                   : CoeffPoly::prime(ctx, ka.s);
                CoeffPoly q = Q.tsum_ * px;
                out += ca * BaseExpr::boundary_sum(ctx, q + q.swapped(), Convention::unordered);
            }
        }
    };
    one_side(A, B);
    one_side(B, A);

    auto symbol_index = [&](const CurveAtom& a) {
        return a.kind == CurveAtomKind::omega ? ctx.omega() : a.s;
    };
    for (const auto& [ka, ca] : A.terms_) {
        if (ka.kind == CurveAtomKind::tilde) continue;
        for (const auto& [kb, cb] : B.terms_) {
            if (kb.kind == CurveAtomKind::tilde) continue;
            out += ca * cb * BaseExpr::push_pp(ctx, symbol_index(ka), symbol_index(kb));
        }
    }
    return out;
}

// Pullback along the i-th section.  Symbols restrict to their section
// pullbacks, the canonical symbol to the conormal class, and pulled-back
// base classes to themselves.  Tilde classes are out of range.
inline BaseExpr sect_pull(int i, const CurveExpr& e) {
    const Context& ctx = e.ctx();
    if (e.has_tilde())
        throw fragment_error(
            "outside supported fragment: section pullback of a total-space boundary class");
    BaseExpr out = e.pull_;
    for (const auto& [k, c] : e.terms_) {
        int s = k.kind == CurveAtomKind::omega ? ctx.omega() : k.s;
        out += c * BaseExpr::sect_pull(ctx, i, s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text form.  One line, terms joined by signs, coefficients as rationals:
//   pi_*(D.D) + 3 pi_*(D.omega) - Sum'[ 3 x'(D) - x'(D)^2 ] Delta
// Sum[...] is the ordered flavor, Sum'[...] the unordered one; `Delta~`
// marks total-space boundary classes, `Delta[...]` a single splitting.

namespace detail {

struct RenderPiece {
    bool neg = false;
    std::string text;
};

inline std::string join_pieces(const std::vector<RenderPiece>& pieces) {
    if (pieces.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i == 0)
            out += pieces[i].neg ? "- " : "";
        else
            out += pieces[i].neg ? " - " : " + ";
        out += pieces[i].text;
    }
    return out;
}

inline RenderPiece scaled_piece(const Rat& c, const std::string& body) {
    RenderPiece p;
    p.neg = c < 0;
    Rat a = p.neg ? Rat(-c) : c;
    p.text = a == 1 ? body : rat_str(a) + " " + body;
    return p;
}

inline RenderPiece sum_piece(const CoeffPoly& P, const std::string& suffix) {
    RenderPiece p;
    p.neg = P.leading_negative();
    CoeffPoly body = p.neg ? -P : P;
    p.text = "[ " + body.render() + " ] " + suffix;
    return p;
}

}  // namespace detail

inline std::string BaseExpr::render() const {
    std::vector<detail::RenderPiece> pieces;
    for (const auto& [k, c] : terms_) {
        std::string body;
        switch (k.kind) {
            case BaseAtomKind::c2push: body = "c2"; break;
            case BaseAtomKind::pushpp:
                body = "pi_*(" + ctx_->sym(k.a).name + "." + ctx_->sym(k.b).name + ")";
                break;
            case BaseAtomKind::sectpull:
                body = "s" + std::to_string(k.a) + "^*(" + ctx_->sym(k.b).name + ")";
                break;
            case BaseAtomKind::boundary:
                body = "Delta[" + render_index(*ctx_, k.idx) + "]";
                break;
        }
        pieces.push_back(detail::scaled_piece(c, body));
    }
    if (!usum_.is_zero()) {
        auto p = detail::sum_piece(usum_, "Delta");
        p.text = "Sum'" + p.text;
        pieces.push_back(p);
    }
    if (!osum_.is_zero()) {
        auto p = detail::sum_piece(osum_, "Delta");
        p.text = "Sum" + p.text;
        pieces.push_back(p);
    }
    return detail::join_pieces(pieces);
}

inline std::string CurveExpr::render() const {
    std::vector<detail::RenderPiece> pieces;
    for (const auto& [k, c] : terms_) {
        std::string body;
        switch (k.kind) {
            case CurveAtomKind::sym: body = ctx_->sym(k.s).name; break;
            case CurveAtomKind::omega: body = "omega"; break;
            case CurveAtomKind::tilde:
                body = "Delta~[" + render_index(*ctx_, k.idx) + "]";
                break;
        }
        pieces.push_back(detail::scaled_piece(c, body));
    }
    if (!pull_.is_zero()) {
        detail::RenderPiece p;
        p.neg = pull_.leading_negative();
        BaseExpr body = p.neg ? -pull_ : pull_;
        p.text = "pi^*( " + body.render() + " )";
        pieces.push_back(p);
    }
    if (!tsum_.is_zero()) {
        auto p = detail::sum_piece(tsum_, "Delta~");
        p.text = "Sum" + p.text;
        pieces.push_back(p);
    }
    return detail::join_pieces(pieces);
}

namespace detail {

inline long signed_integer(TextCursor& cur) {
    bool neg = cur.eat("-");
    long v = cur.integer();
    return neg ? -v : v;
}

inline SplitIndex parse_index_body(const Context& ctx, TextCursor& cur) {
    SplitIndex idx;
    idx.dp.assign(ctx.coords(), 0);
    std::vector<bool> seen(ctx.coords(), false);
    do {
        std::string name = cur.ident();
        int s = ctx.require(name);
        if (ctx.is_omega(s)) cur.fail("the canonical symbol carries no splitting coordinate");
        if (seen[s]) cur.fail("duplicate coordinate '" + name + "'");
        cur.expect("=");
        cur.expect("(");
        long a = signed_integer(cur);
        cur.expect(",");
        long b = signed_integer(cur);
        cur.expect(")");
        if (a + b != ctx.degree(s))
            cur.fail("the two parts of '" + name + "' must sum to its degree " +
                     std::to_string(ctx.degree(s)));
        idx.dp[s] = a;
        seen[s] = true;
    } while (cur.eat(","));
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) cur.fail("missing coordinate for '" + ctx.sym((int)i).name + "'");
    validate_index(ctx, idx);
    return idx;
}

// Coefficient handling shared by the two expression grammars: an optional
// rational followed by an optional '*'.  A bare rational is only the zero
// expression; any other constant is not a divisor class.
inline bool parse_coefficient(TextCursor& cur, Rat& coeff) {
    if (!cur.peek_digit()) return true;
    coeff = cur.rational();
    cur.eat("*");
    cur.skip_ws();
    if (cur.done() || cur.peek("+") || cur.peek("-") || cur.peek(")") || cur.peek("]")) {
        if (coeff != 0) cur.fail("a nonzero constant is not a divisor class");
        return false;  // constant zero term, no atom follows
    }
    return true;
}

inline BaseExpr parse_base_expr(const Context& ctx, TextCursor& cur);

inline BaseExpr parse_base_atom(const Context& ctx, TextCursor& cur) {
    if (cur.eat("pi_*(")) {
        std::string a = cur.ident();
        cur.expect(".");
        std::string b = cur.ident();
        cur.expect(")");
        return BaseExpr::push_pp(ctx, ctx.require(a), ctx.require(b));
    }
    std::string id = cur.ident();
    if (id == "c2") return BaseExpr::c2_push(ctx);
    if (id == "psi") {
        cur.expect("(");
        long i = cur.integer();
        cur.expect(")");
        int s = ctx.section((int)i);
        return Rat(-1) * BaseExpr::push_pp(ctx, s, s);
    }
    if (id == "Sum") {
        Convention conv = cur.eat("'") ? Convention::unordered : Convention::ordered;
        cur.expect("[");
        CoeffPoly P = parse_poly_expr(ctx, cur);
        cur.expect("]");
        cur.expect("Delta");
        if (cur.peek("~")) cur.fail("'Delta~' lives on the total space, not the base");
        return BaseExpr::boundary_sum(ctx, P, conv);
    }
    if (id == "Delta") {
        if (cur.peek("~")) cur.fail("'Delta~' lives on the total space, not the base");
        cur.expect("[");
        SplitIndex idx = parse_index_body(ctx, cur);
        cur.expect("]");
        return BaseExpr::boundary(ctx, idx);
    }
    if (id.size() > 1 && id[0] == 's' &&
        id.find_first_not_of("0123456789", 1) == std::string::npos && cur.peek("^*(")) {
        cur.expect("^*(");
        std::string name = cur.ident();
        cur.expect(")");
        return BaseExpr::sect_pull(ctx, (int)std::stol(id.substr(1)), ctx.require(name));
    }
    cur.fail("'" + id + "' does not start a base-level term");
}

inline BaseExpr parse_base_expr(const Context& ctx, TextCursor& cur) {
    BaseExpr out(ctx);
    bool first = true;
    for (;;) {
        cur.skip_ws();
        Rat sign = 1;
        if (cur.eat("-"))
            sign = -1;
        else if (!cur.eat("+") && !first)
            break;
        first = false;
        Rat coeff = 1;
        if (parse_coefficient(cur, coeff)) out += sign * coeff * parse_base_atom(ctx, cur);
    }
    return out;
}

inline CurveExpr parse_curve_atom(const Context& ctx, TextCursor& cur) {
    if (cur.eat("pi^*(")) {
        BaseExpr inner = parse_base_expr(ctx, cur);
        cur.expect(")");
        return CurveExpr::base_pull(ctx, inner);
    }
    std::string id = cur.ident();
    if (id == "omega") return CurveExpr::omega(ctx);
    if (id == "Delta") {
        cur.expect("~");
        cur.expect("[");
        SplitIndex idx = parse_index_body(ctx, cur);
        cur.expect("]");
        return CurveExpr::tilde(ctx, idx);
    }
    if (id == "Sum") {
        Convention conv = cur.eat("'") ? Convention::unordered : Convention::ordered;
        cur.expect("[");
        CoeffPoly P = parse_poly_expr(ctx, cur);
        cur.expect("]");
        cur.expect("Delta");
        cur.expect("~");
        return CurveExpr::tilde_sum(ctx, P, conv);
    }
    if (id == "psi" || id == "c2" || id == "pi" || id == "pi_")
        cur.fail("'" + id + "' is a base class; wrap it in pi^*( ... )");
    int s = ctx.find(id);
    if (s < 0) cur.fail("unknown symbol '" + id + "'");
    return CurveExpr::sym(ctx, s);
}

inline CurveExpr parse_curve_expr(const Context& ctx, TextCursor& cur) {
    CurveExpr out(ctx);
    bool first = true;
    for (;;) {
        cur.skip_ws();
        Rat sign = 1;
        if (cur.eat("-"))
            sign = -1;
        else if (!cur.eat("+") && !first)
            break;
        first = false;
        Rat coeff = 1;
        if (parse_coefficient(cur, coeff)) out += sign * coeff * parse_curve_atom(ctx, cur);
    }
    return out;
}

}  // namespace detail

inline BaseExpr BaseExpr::parse(const Context& ctx, const std::string& text) {
    detail::TextCursor cur(text);
    BaseExpr e = detail::parse_base_expr(ctx, cur);
    if (!cur.done()) cur.fail("unexpected trailing input");
    return e;
}

inline CurveExpr CurveExpr::parse(const Context& ctx, const std::string& text) {
    detail::TextCursor cur(text);
    CurveExpr e = detail::parse_curve_expr(ctx, cur);
    if (!cur.done()) cur.fail("unexpected trailing input");
    return e;
}

}  // namespace taut0

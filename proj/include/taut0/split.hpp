#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "taut0/context.hpp"
#include "taut0/poly.hpp"
#include "taut0/rational.hpp"

// Splitting indices: one way of distributing every tracked symbol's degree
// over the two sides of a one-node degeneration.  Only the first-side
// degrees are stored; the second side is determined by the totals.  The
// simultaneous swap of all coordinates gives an involution, and unordered
// boundary classes are indexed by swap-orbits via a canonical orientation.

namespace taut0 {

struct SplitIndex {
    std::vector<long> dp;  // first-side degree per coordinate symbol
    auto operator<=>(const SplitIndex&) const = default;
};

inline void validate_index(const Context& ctx, const SplitIndex& idx) {
    if (idx.dp.size() != ctx.coords()) throw input_error("splitting index has wrong arity");
    for (size_t i = 0; i < idx.dp.size(); ++i)
        if (ctx.is_section((int)i) && idx.dp[i] != 0 && idx.dp[i] != 1)
            throw input_error("section splitting must be (1,0) or (0,1)");
}

inline SplitIndex swap_index(const Context& ctx, const SplitIndex& idx) {
    SplitIndex out = idx;
    for (size_t i = 0; i < out.dp.size(); ++i) out.dp[i] = ctx.degree((int)i) - out.dp[i];
    return out;
}

inline bool is_diagonal(const Context& ctx, const SplitIndex& idx) {
    for (size_t i = 0; i < idx.dp.size(); ++i)
        if (2 * idx.dp[i] != ctx.degree((int)i)) return false;
    return true;
}

// Canonical orientation: at the first coordinate whose two sides differ,
// the larger degree goes first.  For sections this puts marking 1 (or the
// lowest marking on the big side) primed; for a pure degree symbol it puts
// the nonnegative half first, matching how the boundary classes are
// usually labeled.
inline bool is_canonical(const Context& ctx, const SplitIndex& idx) {
    for (size_t i = 0; i < idx.dp.size(); ++i) {
        long d = idx.dp[i], dd = ctx.degree((int)i) - idx.dp[i];
        if (d != dd) return d > dd;
    }
    return true;  // diagonal
}

inline SplitIndex canonicalize(const Context& ctx, const SplitIndex& idx) {
    return is_canonical(ctx, idx) ? idx : swap_index(ctx, idx);
}

// Markings on the primed side, as a bitmask (bit k = marking k+1).
inline uint32_t section_mask(const Context& ctx, const SplitIndex& idx) {
    uint32_t m = 0;
    for (int i = 1; i <= ctx.r(); ++i)
        if (idx.dp[ctx.section(i)] == 1) m |= 1u << (i - 1);
    return m;
}

namespace detail {

// Stability filter: on a family of stable curves, a side of a one-node
// degeneration that carries no curve-degree data must carry at least two
// markings.  Sides are judged on the general symbols only; the canonical
// symbol is not data that can stabilize a component.
inline bool passes_stability(const Context& ctx, const SplitIndex& idx) {
    if (ctx.mode != StabilityMode::deligne_mumford) return true;
    bool primed_zero = true, dprimed_zero = true;
    for (size_t i = 0; i < idx.dp.size(); ++i) {
        if (ctx.is_section((int)i)) continue;
        if (idx.dp[i] != 0) primed_zero = false;
        if (ctx.degree((int)i) - idx.dp[i] != 0) dprimed_zero = false;
    }
    int primed_marks = 0, dprimed_marks = 0;
    for (int m = 1; m <= ctx.r(); ++m)
        (idx.dp[ctx.section(m)] == 1 ? primed_marks : dprimed_marks) += 1;
    if (primed_zero && primed_marks < 2) return false;
    if (dprimed_zero && dprimed_marks < 2) return false;
    return true;
}

}  // namespace detail

// All canonical splitting indices of the context, sorted.  Throws the
// "unbounded expansion" error when a general symbol lacks an effectivity
// bound, since nothing else makes the set finite.
inline std::vector<SplitIndex> enumerate_indices(const Context& ctx) {
    std::vector<std::vector<long>> choices(ctx.coords());
    for (size_t i = 0; i < ctx.coords(); ++i) {
        const TrackedSymbol& s = ctx.sym((int)i);
        if (s.kind == SymbolKind::section)
            choices[i] = {0, 1};
        else
            choices[i] = s.eff.primed_values(s.degree, s.name);
    }
    std::vector<SplitIndex> out;
    SplitIndex cur;
    cur.dp.assign(ctx.coords(), 0);
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == ctx.coords()) {
            if (is_canonical(ctx, cur) && detail::passes_stability(ctx, cur)) out.push_back(cur);
            return;
        }
        for (long d : choices[i]) {
            cur.dp[i] = d;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;  // lexicographic by construction
}

enum class Convention { ordered, unordered };

// Expands a boundary sum into explicit coefficients per canonical index.
// Ordered sums run over splitting sequences, so an index whose two
// orientations differ picks up both evaluations, while a self-swapped one
// is hit once.  Unordered sums evaluate once per index and require a
// swap-symmetric polynomial for that to be well defined.
inline std::map<SplitIndex, Rat> expand_sum(const Context& ctx, const CoeffPoly& P,
                                            Convention conv) {
    if (&P.ctx() != &ctx) throw input_error("coefficient polynomial belongs to another context");
    if (conv == Convention::unordered && !P.swap_symmetric())
        throw input_error(
            "unordered boundary sum needs a swap-symmetric coefficient; "
            "f(e',e'') must equal f(e'',e')");
    std::map<SplitIndex, Rat> out;
    for (const SplitIndex& idx : enumerate_indices(ctx)) {
        Rat v = P.eval(idx.dp);
        if (conv == Convention::ordered && !is_diagonal(ctx, idx))
            v += P.eval(swap_index(ctx, idx).dp);
        out[idx] = v;
    }
    return out;
}

inline std::string render_index(const Context& ctx, const SplitIndex& idx) {
    std::string s;
    for (size_t i = 0; i < idx.dp.size(); ++i) {
        if (!s.empty()) s += ", ";
        s += ctx.sym((int)i).name + "=(" + std::to_string(idx.dp[i]) + "," +
             std::to_string(ctx.degree((int)i) - idx.dp[i]) + ")";
    }
    return s;
}

}  // namespace taut0

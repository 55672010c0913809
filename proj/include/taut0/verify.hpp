#pragma once
// Bridge from symbolic base expressions to the boundary-divisor coordinates
// of the moduli space of stable marked rational curves.  A context with
// sections only (no map to a target) specializes: section self-intersections
// push to psi classes and boundary sums land on the divisor basis, where the
// relation-reduction and curve-pairing oracles give an independent numerical
// zero test.

#include "taut0/expr.hpp"
#include "taut0/mbar.hpp"

namespace taut0 {

// The context in which specialization is defined: markings only, nodal
// stability, pairwise disjoint sections.
inline Context no_map_context(int n) {
    check_mbar_n(n);
    return Context::make(n, {}, StabilityMode::deligne_mumford);
}

inline void check_no_map(const Context& ctx) {
    if (ctx.symbols().size() != (size_t)ctx.r() + 1)
        throw input_error("not a no-map expression: context tracks general symbols");
    if (ctx.mode != StabilityMode::deligne_mumford)
        throw input_error("specialization needs nodal stability");
    if (!ctx.disjoint_sections)
        throw input_error("specialization assumes pairwise disjoint sections");
    check_mbar_n(ctx.r());
}

// Writes a base expression in boundary-divisor coordinates.  Sums are
// expanded first, so only explicit atoms remain: pi_*(s_i.s_i) -> -psi_i,
// pi_*(s_i.omega) -> psi_i, crossing terms pi_*(s_i.s_j) die, and each
// boundary class becomes the basis vector of its marking split.  Atoms
// without a rule (the c2 atom, anything involving a general symbol or
// pi_*(omega.omega)) are rejected.
inline MbarVector specialize(const Context& ctx, const MbarSpace& sp, const BaseExpr& e) {
    check_no_map(ctx);
    if (sp.n() != ctx.r())
        throw input_error("marking count mismatch between context and divisor space");
    const auto& syms = ctx.symbols();
    MbarVector v = sp.zero();
    const BaseExpr flat = e.expanded();
    for (const auto& [atom, coeff] : flat.terms()) {
        switch (atom.kind) {
            case BaseAtomKind::boundary:
                v += coeff * sp.boundary(section_mask(ctx, atom.idx));
                break;
            case BaseAtomKind::pushpp: {
                const TrackedSymbol& a = syms[(size_t)atom.a];
                const TrackedSymbol& b = syms[(size_t)atom.b];
                if (a.kind == SymbolKind::section && b.kind == SymbolKind::section) {
                    if (atom.a == atom.b) v -= coeff * sp.psi(a.marking);
                    // distinct disjoint sections meet nowhere: nothing to add
                } else if (a.kind == SymbolKind::section &&
                           b.kind == SymbolKind::canonical) {
                    v += coeff * sp.psi(a.marking);
                } else {
                    throw input_error("'" + e.render() +
                                      "' is not a no-map expression: no rule for pi_*(" +
                                      a.name + "." + b.name + ")");
                }
                break;
            }
            default:
                throw input_error("'" + e.render() + "' is not a no-map expression");
        }
    }
    return v;
}

// One marking count, both oracles, many expressions: builds the divisor
// space once and reuses it per query.
class NoMapVerifier {
public:
    explicit NoMapVerifier(int n) : ctx_(no_map_context(n)), sp_(n) {}

    const Context& ctx() const { return ctx_; }
    const MbarSpace& space() const { return sp_; }

    MbarVector specialize(const BaseExpr& e) const { return taut0::specialize(ctx_, sp_, e); }

    MbarZeroReport verify_zero(const BaseExpr& e) const {
        return mbar_verify_zero(sp_, specialize(e));
    }

private:
    Context ctx_;
    MbarSpace sp_;
};

inline MbarZeroReport specialize_and_verify(const Context& ctx, const BaseExpr& e) {
    check_no_map(ctx);
    MbarSpace sp(ctx.r());
    return mbar_verify_zero(sp, specialize(ctx, sp, e));
}

}  // namespace taut0

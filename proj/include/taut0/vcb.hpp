#pragma once
// Determinant bookkeeping for a family of rational curves mapping to a
// smooth target: the pushforward operator at first-Chern-class level, the
// determinant of the pushed-forward tangent complex, the determinant of the
// dual of the log differentials along the sections, and their combination,
// the virtual canonical class.  Everything is a rank plus a BaseExpr, exact
// over the rationals and valid modulo torsion.

#include "taut0/relations.hpp"

namespace taut0 {

// Numerical data of the target space: its dimension together with the
// tracked symbol that records the pullback of the target's canonical class.
// The pushed-forward second Chern class is the engine's own `c2` atom, so it
// needs no field here.
struct TargetData {
    int n = 0;   // dimension of the target
    int K = -1;  // symbol index of the pulled-back canonical class

    static TargetData of(const Context& ctx, int n, const std::string& k_name = "K") {
        if (n <= 0) throw input_error("target dimension must be positive");
        int K = ctx.require(k_name);
        if (ctx.symbols()[(size_t)K].kind != SymbolKind::general)
            throw input_error("'" + k_name + "' must be a tracked general symbol");
        return {n, K};
    }
};

// Fiber degree of the dual of the pulled-back canonical class.  The
// determinant formulas divide by it, so zero is rejected up front.
inline long anticanonical_degree(const Context& ctx, const TargetData& t) {
    long d = ctx.symbols().at((size_t)t.K).degree;
    if (d == 0)
        throw input_error(
            "the pulled-back canonical class must have nonzero fiber degree");
    return -d;
}

// The determinant-of-pushforward operator at divisor level: a complex on the
// total space with Chern data (C1, C2) pushes to pi_*(C1^2 - 2 C2).
inline BaseExpr q_pi(const CurveExpr& C1, const BaseExpr& C2) {
    return push_product(C1, C1) - 2 * C2;
}

inline BaseExpr q_pi(const CurveExpr& C1) { return push_product(C1, C1); }

// Determinant of the pushed-forward pullback of the target tangent complex,
// shifted so the rank is delta + n for delta the anticanonical degree.  The
// boundary term weights each splitting by the product of the anticanonical
// degrees of its two sides, which is x'(K) x''(K) after the signs cancel.
inline DetClass tx_det(const Context& ctx, const TargetData& t) {
    long delta = anticanonical_degree(ctx, t);
    Rat d(delta);
    BaseExpr c1 = BaseExpr::c2_push(ctx) -
                  Rat((d + 1) / (2 * d)) * BaseExpr::push_pp(ctx, t.K, t.K) +
                  Rat(1) / (2 * d) *
                      BaseExpr::boundary_sum(
                          ctx,
                          CoeffPoly::prime(ctx, t.K) * CoeffPoly::dprime(ctx, t.K),
                          Convention::unordered);
    return {delta + t.n, c1};
}

// The two displayed shapes of the same determinant class: one carries the
// section self-intersections, the other trades them for a weighted boundary
// sum (the rel8_sum rewriting, which needs at least two markings).
enum class OmegaSectionsForm { self_intersection, boundary };

// Determinant of the dual of the relative log differentials along the
// sections.  Rank 3 - r at any r; the boundary form scales the ordered sum
// over splittings through marking 1 by 1/(r-1).
inline DetClass omega_sections_det(
    const Context& ctx, OmegaSectionsForm form = OmegaSectionsForm::self_intersection) {
    if (form == OmegaSectionsForm::self_intersection) return rel11_det(ctx);
    detail::need_markings(ctx, 2, "the boundary form of omega_sections_det");
    CoeffPoly T = detail::far_side_markings(ctx, 1);
    CoeffPoly P = CoeffPoly::prime(ctx, ctx.section(1)) * T *
                  (CoeffPoly::constant(ctx, ctx.r()) - T);
    BaseExpr c1 =
        -2 * BaseExpr::boundary_sum(ctx, CoeffPoly::constant(ctx, 1),
                                    Convention::unordered) +
        Rat(1, ctx.r() - 1) * BaseExpr::boundary_sum(ctx, P, Convention::ordered);
    return {3 - ctx.r(), c1};
}

// Rank and first Chern class of the virtual canonical bundle of the family.
// Built from the displayed closed forms case by case; the vcb tests pin it
// against omega_sections_det + tx_det, which the construction must match
// term for term.
inline DetClass virtual_canonical(const Context& ctx, const TargetData& t) {
    long delta = anticanonical_degree(ctx, t);
    Rat d(delta);
    int r = ctx.r();

    // Shared bracket: [2d c2 - (d+1) pi_*(K.K) + Sum'( x'(K) x''(K) - 4d )] / (2d).
    CoeffPoly P = CoeffPoly::prime(ctx, t.K) * CoeffPoly::dprime(ctx, t.K) -
                  CoeffPoly::constant(ctx, 4 * d);
    BaseExpr c1 = BaseExpr::c2_push(ctx) -
                  Rat((d + 1) / (2 * d)) * BaseExpr::push_pp(ctx, t.K, t.K) +
                  Rat(1) / (2 * d) * BaseExpr::boundary_sum(ctx, P, Convention::unordered);

    if (r == 1) {
        c1 -= BaseExpr::push_pp(ctx, ctx.section(1), ctx.section(1));
    } else if (r >= 2) {
        CoeffPoly T = detail::far_side_markings(ctx, 1);
        CoeffPoly tail = CoeffPoly::prime(ctx, ctx.section(1)) * T *
                         (CoeffPoly::constant(ctx, r) - T);
        c1 += Rat(1, r - 1) * BaseExpr::boundary_sum(ctx, tail, Convention::ordered);
    }
    return {delta + t.n + r - 3, c1};
}

}  // namespace taut0

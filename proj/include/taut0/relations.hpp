#pragma once

#include <string>
#include <vector>

#include "taut0/expr.hpp"

// The divisor-class identities the engine is built around.  Each rel*
// constructor returns "left side minus right side" of one identity as a
// normalized expression; the construction is formal and the vanishing is
// checked elsewhere (structurally against other identities, or numerically
// in the no-map specialization).
//
// rel1   pushed self-intersection of one divisor against the boundary
// rel2   its polarization in two divisors
// rel3   section self-intersection against the canonical class
// rel4   section pullback of a divisor, the quadratic form along a section
// rel5   the total-space form whose pushforward against D recovers rel1
// rel6   two disjoint sections meeting nothing
// rel7   the induced linear identity for all sections at once
// rel8   three equivalent quadratic forms in the marking partition sizes
// rel9   the difference of two rel8 sums under relabeling
// rel10  section pullback rewritten purely in boundary terms
// rel11  rank and determinant of the section-conormal complex

namespace taut0 {

struct DetClass {
    long rank = 0;
    BaseExpr c1;
};

namespace detail {

inline void need_markings(const Context& ctx, int r_min, const std::string& id) {
    if (ctx.r() < r_min)
        throw input_error(id + " needs at least " + std::to_string(r_min) +
                          " markings (context has " + std::to_string(ctx.r()) + ")");
    if (!ctx.disjoint_sections)
        throw input_error(id + " assumes pairwise disjoint sections");
}

// Number of markings other than i on the second side of a splitting.
inline CoeffPoly far_side_markings(const Context& ctx, int i) {
    CoeffPoly t(ctx);
    for (int m = 1; m <= ctx.r(); ++m)
        if (m != i) t += CoeffPoly::dprime(ctx, ctx.section(m));
    return t;
}

inline SymCombo omega_combo(const Context& ctx) { return SymCombo::of(ctx, ctx.omega()); }

}  // namespace detail

// pi_*(D.D) + <D,b> pi_*(D.omega) = Sum'[ x'(D) x''(D) ] Delta
inline BaseExpr rel1(const Context& ctx, const SymCombo& D) {
    Rat e = D.degree();
    return BaseExpr::push_pp(ctx, D, D) +
           e * BaseExpr::push_pp(ctx, D, detail::omega_combo(ctx)) -
           BaseExpr::boundary_sum(ctx, prime_poly(D) * dprime_poly(D), Convention::unordered);
}

// The bilinear form of rel1: rel2(D,D) = 2 rel1(D).
inline BaseExpr rel2(const Context& ctx, const SymCombo& D1, const SymCombo& D2) {
    Rat e1 = D1.degree(), e2 = D2.degree();
    CoeffPoly mixed = prime_poly(D1) * dprime_poly(D2) + prime_poly(D2) * dprime_poly(D1);
    return 2 * BaseExpr::push_pp(ctx, D1, D2) +
           e1 * BaseExpr::push_pp(ctx, D2, detail::omega_combo(ctx)) +
           e2 * BaseExpr::push_pp(ctx, D1, detail::omega_combo(ctx)) -
           BaseExpr::boundary_sum(ctx, mixed, Convention::unordered);
}

// pi_*(s_i.s_i) + pi_*(s_i.omega) = 0: the family restricted to a section
// has trivial canonical class.
inline BaseExpr rel3(const Context& ctx, int i) {
    int s = ctx.section(i);
    return BaseExpr::push_pp(ctx, s, s) + BaseExpr::push_pp(ctx, s, ctx.omega());
}

// 2<D,b> s_i^*(D) = pi_*(D.D) + <D,b>^2 pi_*(s_i.s_i)
//                   + Sum'[ x'(D)^2 x''(s_i) + x''(D)^2 x'(s_i) ] Delta
inline BaseExpr rel4(const Context& ctx, int i, const SymCombo& D) {
    int s = ctx.section(i);
    Rat e = D.degree();
    CoeffPoly xi = CoeffPoly::prime(ctx, s);
    CoeffPoly xii = CoeffPoly::dprime(ctx, s);
    CoeffPoly P = prime_poly(D).pow(2) * xii + dprime_poly(D).pow(2) * xi;
    return 2 * e * BaseExpr::sect_pull(ctx, i, D) - BaseExpr::push_pp(ctx, D, D) -
           e * e * BaseExpr::push_pp(ctx, s, s) -
           BaseExpr::boundary_sum(ctx, P, Convention::unordered);
}

// The total-space identity: 2<D,b> D = pi^*pi_*(D.D) - <D,b>^2 omega
//                                      + Sum[ x''(D)^2 ] Delta~
inline CurveExpr rel5(const Context& ctx, const SymCombo& D) {
    Rat e = D.degree();
    return 2 * e * CurveExpr::sym(ctx, D) -
           CurveExpr::base_pull(ctx, BaseExpr::push_pp(ctx, D, D)) +
           e * e * CurveExpr::omega(ctx) -
           CurveExpr::tilde_sum(ctx, dprime_poly(D).pow(2), Convention::ordered);
}

// pi_*(s_i.s_i) + pi_*(s_j.s_j) = - Sum[ x'(s_i) x''(s_j) ] Delta
inline BaseExpr rel6(const Context& ctx, int i, int j) {
    detail::need_markings(ctx, 2, "rel6");
    if (i == j) throw input_error("rel6 needs two distinct markings");
    int si = ctx.section(i), sj = ctx.section(j);
    CoeffPoly P = CoeffPoly::prime(ctx, si) * CoeffPoly::dprime(ctx, sj);
    return BaseExpr::push_pp(ctx, si, si) + BaseExpr::push_pp(ctx, sj, sj) +
           BaseExpr::boundary_sum(ctx, P, Convention::ordered);
}

// Summing rel6 over the pairs (1,j): a linear identity in all the section
// self-intersections with the count of far-side markings as coefficient.
inline BaseExpr rel7(const Context& ctx) {
    detail::need_markings(ctx, 1, "rel7");
    int s1 = ctx.section(1);
    BaseExpr e = BaseExpr::zero(ctx);
    for (int m = 1; m <= ctx.r(); ++m)
        e -= BaseExpr::push_pp(ctx, ctx.section(m), ctx.section(m));
    e -= Rat(ctx.r() - 2) * BaseExpr::push_pp(ctx, s1, s1);
    CoeffPoly P = CoeffPoly::prime(ctx, s1) * detail::far_side_markings(ctx, 1);
    return e - BaseExpr::boundary_sum(ctx, P, Convention::ordered);
}

// The three quadratic forms of the same flavor.  Writing T for the number
// of markings j >= 2 on the far side of a splitting:
//   rel8_first  -Sum_i pi(s_i.s_i) - r(r-2) pi(s_1.s_1) = Sum[ x'(s_1) T^2 ]
//   rel8_psi    (r-1)(r-2) pi(s_1.s_1)                  = -Sum[ x'(s_1) T(T-1) ]
//   rel8_sum    -(r-1) Sum_i pi(s_i.s_i)                = Sum[ x'(s_1) T(r-T) ]
inline BaseExpr rel8_first(const Context& ctx) {
    detail::need_markings(ctx, 2, "rel8");
    int s1 = ctx.section(1);
    BaseExpr e = BaseExpr::zero(ctx);
    for (int m = 1; m <= ctx.r(); ++m)
        e -= BaseExpr::push_pp(ctx, ctx.section(m), ctx.section(m));
    e -= Rat(ctx.r()) * Rat(ctx.r() - 2) * BaseExpr::push_pp(ctx, s1, s1);
    CoeffPoly P = CoeffPoly::prime(ctx, s1) * detail::far_side_markings(ctx, 1).pow(2);
    return e - BaseExpr::boundary_sum(ctx, P, Convention::ordered);
}

inline BaseExpr rel8_psi(const Context& ctx) {
    detail::need_markings(ctx, 2, "rel8");
    int s1 = ctx.section(1);
    long r = ctx.r();
    CoeffPoly T = detail::far_side_markings(ctx, 1);
    CoeffPoly P = CoeffPoly::prime(ctx, s1) * T * (T - CoeffPoly::constant(ctx, 1));
    return Rat((r - 1) * (r - 2)) * BaseExpr::push_pp(ctx, s1, s1) +
           BaseExpr::boundary_sum(ctx, P, Convention::ordered);
}

inline BaseExpr rel8_sum(const Context& ctx) {
    detail::need_markings(ctx, 2, "rel8");
    long r = ctx.r();
    BaseExpr e = BaseExpr::zero(ctx);
    for (int m = 1; m <= ctx.r(); ++m)
        e -= Rat(r - 1) * BaseExpr::push_pp(ctx, ctx.section(m), ctx.section(m));
    CoeffPoly T = detail::far_side_markings(ctx, 1);
    CoeffPoly P = CoeffPoly::prime(ctx, ctx.section(1)) * T * (CoeffPoly::constant(ctx, r) - T);
    return e - BaseExpr::boundary_sum(ctx, P, Convention::ordered);
}

// The rel8_sum boundary weight #B(r - #B) only sees the unordered marking
// partition, so the distinguished marking drops out; the difference of two
// relabelings is identically zero, which the canonical form exhibits.
inline BaseExpr rel9(const Context& ctx, int i, int j) {
    detail::need_markings(ctx, 2, "rel9");
    auto weighted = [&](int k) {
        CoeffPoly T = detail::far_side_markings(ctx, k);
        CoeffPoly P =
            CoeffPoly::prime(ctx, ctx.section(k)) * T * (CoeffPoly::constant(ctx, ctx.r()) - T);
        return BaseExpr::boundary_sum(ctx, P, Convention::ordered);
    };
    return weighted(i) - weighted(j);
}

// Section pullback of D in boundary terms only, the combination
// (r-1)(r-2) rel4 + <D,b>^2 rel8_psi with the pi_*(s_i.s_i) terms cancelled.
inline BaseExpr rel10(const Context& ctx, const SymCombo& D, int i = 1) {
    detail::need_markings(ctx, 2, "rel10");
    int s = ctx.section(i);
    Rat e = D.degree();
    Rat c = Rat((ctx.r() - 1) * (ctx.r() - 2));
    CoeffPoly T = detail::far_side_markings(ctx, i);
    CoeffPoly P = CoeffPoly::prime(ctx, s) *
                  (c * dprime_poly(D).pow(2) - e * e * T * (T - CoeffPoly::constant(ctx, 1)));
    return 2 * c * e * BaseExpr::sect_pull(ctx, i, D) - c * BaseExpr::push_pp(ctx, D, D) -
           BaseExpr::boundary_sum(ctx, P, Convention::ordered);
}

// Determinant and rank of the complex of section conormal directions:
// rank 3 - r, first Chern class -2 Delta_total - Sum_i pi_*(s_i.s_i).
inline DetClass rel11_det(const Context& ctx) {
    detail::need_markings(ctx, 0, "rel11");
    BaseExpr c1 =
        Rat(-2) * BaseExpr::boundary_sum(ctx, CoeffPoly::constant(ctx, 1), Convention::unordered);
    for (int m = 1; m <= ctx.r(); ++m)
        c1 -= BaseExpr::push_pp(ctx, ctx.section(m), ctx.section(m));
    return {3 - ctx.r(), c1};
}

// Lengths of the graded pieces of the torsion sheaf attached to a local
// splitting parameter of weight a: 2a-1, 2a-3, ..., 1, of total a^2.
inline std::vector<long> filtration_lengths(long a) {
    if (a < 1) throw input_error("filtration parameter must be a positive integer");
    std::vector<long> out;
    for (long k = 2 * a - 1; k >= 1; k -= 2) out.push_back(k);
    return out;
}

}  // namespace taut0

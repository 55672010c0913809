#include <catch2/catch_amalgamated.hpp>

#include "taut0/vcb.hpp"
#include "taut0/verify.hpp"

using namespace taut0;

namespace {

// Context for maps of degree d to a target of dimension N carrying one
// tracked symbol K for the pulled-back canonical class, of fiber degree
// -(N+1)d as on projective space.
Context target_ctx(int N, long d, int r,
                   StabilityMode mode = StabilityMode::artin) {
    long deg = -(N + 1) * d;
    TrackedSymbol K{"K", SymbolKind::general, deg, Effectivity::abs(std::labs(deg)), 0};
    return Context::make(r, {K}, mode);
}

BaseExpr total_boundary(const Context& ctx) {
    return BaseExpr::boundary_sum(ctx, CoeffPoly::constant(ctx, 1),
                                  Convention::unordered);
}

}  // namespace

TEST_CASE("target data validation") {
    Context ctx = target_ctx(2, 1, 0);
    TargetData t = TargetData::of(ctx, 2);
    CHECK(t.n == 2);
    CHECK(ctx.symbols()[(size_t)t.K].name == "K");
    CHECK(anticanonical_degree(ctx, t) == 3);

    CHECK_THROWS_AS(TargetData::of(ctx, 0), input_error);
    CHECK_THROWS_AS(TargetData::of(ctx, 2, "L"), input_error);
    CHECK_THROWS_WITH(TargetData::of(ctx, 2, "omega"),
                      Catch::Matchers::ContainsSubstring("general symbol"));

    Context flat = Context::make(
        0, {{"K", SymbolKind::general, 0, Effectivity::abs(2), 0}});
    CHECK_THROWS_WITH(anticanonical_degree(flat, TargetData::of(flat, 2)),
                      Catch::Matchers::ContainsSubstring("nonzero fiber degree"));
}

TEST_CASE("pushforward determinant operator") {
    SECTION("the relative canonical class pushes to minus the boundary") {
        Context ctx = Context::make(0, {{"L", SymbolKind::general, 3,
                                         Effectivity::abs(3), 0}});
        BaseExpr q = q_pi(CurveExpr::omega(ctx));
        CHECK(q + rel1(ctx, SymCombo::of(ctx, ctx.omega())) == -total_boundary(ctx));
    }

    SECTION("degree zero line bundles weight splittings by minus a square") {
        Context ctx = Context::make(0, {{"L", SymbolKind::general, 0,
                                         Effectivity::abs(10), 0}});
        SymCombo L = SymCombo::named(ctx, "L");
        BaseExpr residue = q_pi(CurveExpr::sym(ctx, L)) - rel1(ctx, L);
        BaseExpr expected = BaseExpr::zero(ctx);
        for (long a = 1; a <= 10; ++a)
            expected += Rat(-a * a) * BaseExpr::boundary(ctx, SplitIndex{{a}});
        CHECK(residue.expanded() == expected);
    }

    SECTION("twisting by a pullback shifts by twice the degree") {
        for (long e : {3L, 0L, -2L}) {
            Context ctx = Context::make(1, {{"L", SymbolKind::general, e,
                                             Effectivity::abs(3), 0}});
            SymCombo L = SymCombo::named(ctx, "L");
            BaseExpr x = BaseExpr::push_pp(ctx, ctx.require("L"), ctx.omega()) -
                         3 * BaseExpr::c2_push(ctx);
            CurveExpr twisted = CurveExpr::sym(ctx, L) + CurveExpr::base_pull(ctx, x);
            CHECK(q_pi(twisted) - q_pi(CurveExpr::sym(ctx, L)) == 2 * Rat(e) * x);
        }
    }

    SECTION("a second Chern class enters with coefficient minus two") {
        Context ctx = target_ctx(2, 1, 0);
        BaseExpr c2 = BaseExpr::c2_push(ctx);
        CHECK(q_pi(CurveExpr::omega(ctx), c2) ==
              q_pi(CurveExpr::omega(ctx)) - 2 * c2);
    }
}

TEST_CASE("tangent complex determinant") {
    SECTION("rank counts the anticanonical degree plus the dimension") {
        for (auto [N, d] : {std::pair<int, long>{1, 1}, {2, 1}, {2, 2}, {3, 1}, {4, 5}}) {
            Context ctx = target_ctx(N, d, 0);
            CHECK(tx_det(ctx, TargetData::of(ctx, N)).rank == (N + 1) * d + N);
        }
    }

    SECTION("the displayed combination") {
        Context ctx = target_ctx(2, 1, 2);
        TargetData t = TargetData::of(ctx, 2);
        Rat delta = 3;
        int K = t.K;
        BaseExpr expected =
            BaseExpr::c2_push(ctx) -
            Rat(2, 3) * BaseExpr::push_pp(ctx, K, K) +
            Rat(1, 6) * BaseExpr::boundary_sum(
                            ctx, CoeffPoly::prime(ctx, K) * CoeffPoly::dprime(ctx, K),
                            Convention::unordered);
        CHECK(tx_det(ctx, t).c1 == expected);
        CHECK((delta + 1) / (2 * delta) == Rat(2, 3));
    }

    SECTION("no stable splittings leaves the two push terms") {
        Context ctx = Context::make(
            0, {{"K", SymbolKind::general, -2, Effectivity::of_list({0, -2}), 0}},
            StabilityMode::deligne_mumford);
        TargetData t = TargetData::of(ctx, 1);
        BaseExpr bare = BaseExpr::c2_push(ctx) -
                        Rat(3, 4) * BaseExpr::push_pp(ctx, t.K, t.K);
        CHECK(tx_det(ctx, t).c1.expanded() == bare);
    }

    SECTION("degree zero is rejected") {
        Context flat = Context::make(
            0, {{"K", SymbolKind::general, 0, Effectivity::abs(2), 0}});
        CHECK_THROWS_AS(tx_det(flat, TargetData::of(flat, 2)), input_error);
    }
}

TEST_CASE("log differentials determinant along the sections") {
    for (int r = 0; r <= 5; ++r) {
        Context ctx = Context::make(r, {});
        DetClass d = omega_sections_det(ctx);
        CHECK(d.rank == 3 - r);
        CHECK(d.c1 == rel11_det(ctx).c1);
    }

    SECTION("small marking counts in closed form") {
        Context none = Context::make(0, {});
        CHECK(omega_sections_det(none).c1 == -2 * total_boundary(none));
        Context one = Context::make(1, {});
        CHECK(omega_sections_det(one).c1 ==
              -2 * total_boundary(one) -
                  BaseExpr::push_pp(one, one.section(1), one.section(1)));
        Context three = Context::make(3, {});
        CHECK(omega_sections_det(three).rank == 0);
    }

    SECTION("the boundary form differs by the eighth relation") {
        for (int r = 2; r <= 5; ++r) {
            Context ctx = Context::make(r, {});
            BaseExpr self = omega_sections_det(ctx).c1;
            BaseExpr bdry = omega_sections_det(ctx, OmegaSectionsForm::boundary).c1;
            CHECK(self - bdry == Rat(1, r - 1) * rel8_sum(ctx));
        }
        Context one = Context::make(1, {});
        CHECK_THROWS_WITH(omega_sections_det(one, OmegaSectionsForm::boundary),
                          Catch::Matchers::ContainsSubstring("at least 2 markings"));
    }
}

TEST_CASE("virtual canonical class assembly") {
    for (int r = 0; r <= 5; ++r)
        for (auto [N, d] : {std::pair<int, long>{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
            Context ctx = target_ctx(N, d, r);
            TargetData t = TargetData::of(ctx, N);
            DetClass vc = virtual_canonical(ctx, t);
            DetClass tx = tx_det(ctx, t);
            OmegaSectionsForm form = r >= 2 ? OmegaSectionsForm::boundary
                                            : OmegaSectionsForm::self_intersection;
            DetClass om = omega_sections_det(ctx, form);
            CHECK(vc.rank == (N + 1) * d + N + r - 3);
            CHECK(vc.rank == tx.rank + r - 3);
            CHECK(vc.c1 == om.c1 + tx.c1);
        }

    SECTION("a target canonical class of positive fiber degree still assembles") {
        Context ctx = Context::make(
            2, {{"K", SymbolKind::general, 5, Effectivity::abs(5), 0}});
        TargetData t = TargetData::of(ctx, 3);
        CHECK(virtual_canonical(ctx, t).rank == -5 + 3 + 2 - 3);
        CHECK(virtual_canonical(ctx, t).c1 ==
              omega_sections_det(ctx, OmegaSectionsForm::boundary).c1 +
                  tx_det(ctx, t).c1);
    }

    SECTION("rank table") {
        struct Row { int N; long d; int r; long rank; };
        for (auto [N, d, r, rank] : {Row{1, 1, 0, 0}, {2, 1, 0, 2}, {2, 2, 0, 5}, {3, 1, 2, 6}}) {
            Context ctx = target_ctx(N, d, r);
            CHECK(virtual_canonical(ctx, TargetData::of(ctx, N)).rank == rank);
        }
    }

    SECTION("boundary coefficients at no markings") {
        Context ctx = target_ctx(1, 2, 0, StabilityMode::deligne_mumford);
        TargetData t = TargetData::of(ctx, 1);
        BaseExpr c1 = virtual_canonical(ctx, t).c1.expanded();
        // splitting (-1, -3) of the canonical degree: (3 - 16) / 8
        auto it = c1.terms().find(
            BaseAtom{BaseAtomKind::boundary, -1, -1, SplitIndex{{-1}}});
        REQUIRE(it != c1.terms().end());
        CHECK(it->second == Rat(-13, 8));
    }
}

TEST_CASE("the two tails agree across marking counts") {
    // The r >= 2 boundary tail and the section self-intersections name the
    // same class: their difference specializes to zero under both oracles.
    for (int n = 4; n <= 6; ++n) {
        NoMapVerifier nv(n);
        const Context& ctx = nv.ctx();
        BaseExpr self = omega_sections_det(ctx).c1;
        BaseExpr bdry = omega_sections_det(ctx, OmegaSectionsForm::boundary).c1;
        CHECK(nv.verify_zero(self - bdry).zero_class());

        MbarVector psi_total = nv.space().zero();
        for (int i = 1; i <= n; ++i) psi_total += nv.space().psi(i);
        MbarVector tail = nv.specialize(bdry + 2 * total_boundary(ctx));
        CHECK(nv.space().is_zero_mod_relations(tail - psi_total));
    }
}

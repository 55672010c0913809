#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "taut0/split.hpp"

using namespace taut0;

namespace {

Context degree_ctx(long e, long bound, int r = 0,
                   StabilityMode mode = StabilityMode::artin) {
    TrackedSymbol L{"L", SymbolKind::general, e, Effectivity::abs(bound), 0};
    return Context::make(r, {L}, mode);
}

Context sections_ctx(int r, StabilityMode mode = StabilityMode::deligne_mumford) {
    return Context::make(r, {}, mode);
}

}  // namespace

TEST_CASE("effectivity grammar") {
    CHECK(Effectivity::parse("nonneg").primed_values(3, "D") == std::vector<long>{0, 1, 2, 3});
    CHECK(Effectivity::parse("nonneg").primed_values(-1, "D").empty());
    CHECK(Effectivity::parse("bound 2").primed_values(0, "D") == std::vector<long>{-2, -1, 0, 1, 2});
    CHECK(Effectivity::parse("bound 2").primed_values(3, "D") == std::vector<long>{1, 2});
    CHECK(Effectivity::parse("parts 0,1,3").primed_values(3, "D") == std::vector<long>{0, 3});
    CHECK(Effectivity::parse("parts 0,1,3").primed_values(4, "D") == std::vector<long>{1, 3});
    CHECK(Effectivity::parse("bound 2").render() == "bound 2");
    CHECK_THROWS_AS(Effectivity::parse("bound"), input_error);
    CHECK_THROWS_AS(Effectivity::parse("bound -1"), input_error);
    CHECK_THROWS_AS(Effectivity::parse("parts"), input_error);
    CHECK_THROWS_AS(Effectivity::parse("whatever"), input_error);
    CHECK_THROWS_WITH(Effectivity::none().primed_values(1, "D"),
                      Catch::Matchers::ContainsSubstring("unbounded expansion"));
}

TEST_CASE("context construction and symbol order") {
    Context ctx = degree_ctx(2, 3, 2);
    REQUIRE(ctx.symbols().size() == 4);  // s1 s2 L omega
    CHECK(ctx.sym(0).name == "s1");
    CHECK(ctx.sym(1).name == "s2");
    CHECK(ctx.sym(2).name == "L");
    CHECK(ctx.sym(ctx.omega()).name == "omega");
    CHECK(ctx.degree(ctx.omega()) == -2);
    CHECK(ctx.degree(0) == 1);
    CHECK(ctx.coords() == 3);
    CHECK(ctx.require("L") == 2);
    CHECK_THROWS_AS(ctx.require("M"), input_error);
    CHECK_THROWS_AS(ctx.section(3), input_error);

    TrackedSymbol bad{"omega", SymbolKind::general, 1, Effectivity::none(), 0};
    CHECK_THROWS_AS(Context::make(0, {bad}), input_error);
    TrackedSymbol s9{"s9", SymbolKind::general, 1, Effectivity::none(), 0};
    CHECK_THROWS_AS(Context::make(0, {s9}), input_error);
}

TEST_CASE("context file parsing") {
    std::string text =
        "# demo context\n"
        "[mode]\n"
        "stability = \"deligne-mumford\"\n"
        "disjoint_sections = true\n"
        "\n"
        "[sections]\n"
        "count = 2\n"
        "\n"
        "[symbols]\n"
        "D = 2   # a degree-2 class\n"
        "L = 0\n"
        "\n"
        "[effectivity]\n"
        "D = \"nonneg\"\n"
        "L = \"bound 2\"\n";
    Context ctx = parse_context(text);
    CHECK(ctx.mode == StabilityMode::deligne_mumford);
    CHECK(ctx.r() == 2);
    CHECK(ctx.sym(2).name == "D");
    CHECK(ctx.sym(3).name == "L");
    CHECK(ctx.sym(3).eff.kind == Effectivity::Kind::abs_bound);

    SECTION("diagnostics name line and column") {
        CHECK_THROWS_WITH(parse_context("[mode]\nstability = \"both\"\n"),
                          Catch::Matchers::ContainsSubstring("line 2") &&
                              Catch::Matchers::ContainsSubstring("stability"));
        CHECK_THROWS_WITH(parse_context("D = 2\n"),
                          Catch::Matchers::ContainsSubstring("outside any table"));
        CHECK_THROWS_WITH(parse_context("[effectivity]\nD = \"nonneg\"\n"),
                          Catch::Matchers::ContainsSubstring("undeclared"));
        CHECK_THROWS_WITH(parse_context("[symbols]\nD = x\n"),
                          Catch::Matchers::ContainsSubstring("integer"));
        CHECK_THROWS_WITH(parse_context("[wat]\n"),
                          Catch::Matchers::ContainsSubstring("unknown table"));
    }
}

TEST_CASE("index enumeration under the three effectivity shapes") {
    SECTION("degree 0 with |part| <= 2") {
        Context ctx = degree_ctx(0, 2);
        auto idx = enumerate_indices(ctx);
        REQUIRE(idx.size() == 3);
        CHECK(idx[0].dp == std::vector<long>{0});
        CHECK(idx[1].dp == std::vector<long>{1});
        CHECK(idx[2].dp == std::vector<long>{2});
    }
    SECTION("four sections, stable mode: the three 2|2 partitions") {
        auto idx = enumerate_indices(sections_ctx(4));
        REQUIRE(idx.size() == 3);
        // Sorted descending in the first coordinate means marking 1 primed.
        CHECK(section_mask(sections_ctx(4), idx[0]) == 0b1001);
        CHECK(section_mask(sections_ctx(4), idx[1]) == 0b0101);
        CHECK(section_mask(sections_ctx(4), idx[2]) == 0b0011);
    }
    SECTION("two sections, stable mode: nothing survives") {
        CHECK(enumerate_indices(sections_ctx(2)).empty());
    }
    SECTION("artin mode keeps unstable sides") {
        CHECK(enumerate_indices(Context::make(2, {})).size() == 2);  // 1|2 and 12|
    }
    SECTION("stability also prunes degree-zero sides of general symbols") {
        Context dm = degree_ctx(0, 2, 0, StabilityMode::deligne_mumford);
        auto idx = enumerate_indices(dm);
        REQUIRE(idx.size() == 2);  // (0,0) has two dataless sides, dropped
        CHECK(idx[0].dp == std::vector<long>{1});
        CHECK(idx[1].dp == std::vector<long>{2});
    }
    SECTION("missing effectivity fails loudly") {
        TrackedSymbol L{"L", SymbolKind::general, 1, Effectivity::none(), 0};
        Context ctx = Context::make(0, {L});
        CHECK_THROWS_WITH(enumerate_indices(ctx),
                          Catch::Matchers::ContainsSubstring("unbounded expansion"));
    }
}

TEST_CASE("canonicalization") {
    Context ctx = degree_ctx(2, 3, 2);
    SplitIndex a{{0, 1, -1}};
    CHECK_FALSE(is_canonical(ctx, a));
    SplitIndex ca = canonicalize(ctx, a);
    CHECK(ca.dp == std::vector<long>{1, 0, 3});
    CHECK(canonicalize(ctx, ca) == ca);
    CHECK(swap_index(ctx, swap_index(ctx, a)) == a);

    Context d0 = degree_ctx(0, 5);
    CHECK(is_diagonal(d0, SplitIndex{{0}}));
    CHECK_FALSE(is_diagonal(d0, SplitIndex{{2}}));
    CHECK(canonicalize(d0, SplitIndex{{-3}}).dp == std::vector<long>{3});

    CHECK_THROWS_AS(validate_index(ctx, SplitIndex{{2, 0, 0}}), input_error);
    CHECK_THROWS_AS(validate_index(ctx, SplitIndex{{1, 0}}), input_error);
}

TEST_CASE("coefficient polynomial normal form") {
    Context ctx = degree_ctx(2, 3, 2);
    int L = ctx.require("L");

    SECTION("second-side variables eliminate") {
        CoeffPoly p = CoeffPoly::prime(ctx, L) + CoeffPoly::dprime(ctx, L);
        CHECK(p == CoeffPoly::constant(ctx, 2));
    }
    SECTION("section variables are idempotent") {
        CoeffPoly x = CoeffPoly::prime(ctx, 0);
        CHECK(x * x == x);
        CHECK(x.pow(5) == x);
        CoeffPoly y = CoeffPoly::prime(ctx, 0) * CoeffPoly::dprime(ctx, 0);
        CHECK(y.is_zero());  // x(1-x) on {0,1}
    }
    SECTION("omega contributes the constant -1 per side") {
        CHECK(CoeffPoly::prime(ctx, ctx.omega()) == CoeffPoly::constant(ctx, -1));
        CHECK(CoeffPoly::dprime(ctx, ctx.omega()) == CoeffPoly::constant(ctx, -1));
    }
    SECTION("swap is the involution d' -> e - d'") {
        CoeffPoly p = CoeffPoly::parse(ctx, "x'(L)^2 x'(s1)");
        CHECK(p.swapped().swapped() == p);
        CHECK(p.symmetrized().swap_symmetric());
        CHECK_FALSE(p.swap_symmetric());
        CHECK(CoeffPoly::parse(ctx, "x'(L)x''(L)").swap_symmetric());
    }
    SECTION("evaluation is exact") {
        CoeffPoly p = CoeffPoly::parse(ctx, "1/2 x'(L)^2 - 3");
        CHECK(p.eval({0, 0, 5}) == Rat(19, 2));
    }
    SECTION("parse accepts the documented syntax") {
        CHECK(CoeffPoly::parse(ctx, "x'(L)x''(L)") ==
              CoeffPoly::parse(ctx, "x'(L) * (2 - x'(L))"));
        CHECK(CoeffPoly::parse(ctx, "(x'(s1)+x''(s1))^3") == CoeffPoly::constant(ctx, 1));
        CHECK(CoeffPoly::parse(ctx, "-2").render() == "- 2");
        CHECK_THROWS_AS(CoeffPoly::parse(ctx, "x'(Q)"), input_error);
        CHECK_THROWS_AS(CoeffPoly::parse(ctx, "x'(L) +"), input_error);
        CHECK_THROWS_AS(CoeffPoly::parse(ctx, "1/0"), input_error);
        CHECK_THROWS_AS(CoeffPoly::parse(ctx, "x'(L) x'(L) )"), input_error);
    }
    SECTION("render round-trips") {
        CoeffPoly p = CoeffPoly::parse(ctx, "2 x'(L) - x'(L)^2 + 1/3 x'(s1) x'(L)");
        CHECK(CoeffPoly::parse(ctx, p.render()) == p);
    }
}

TEST_CASE("boundary sum expansion") {
    SECTION("unordered square sums give -a^2") {
        Context ctx = degree_ctx(0, 2);
        CoeffPoly p = CoeffPoly::parse(ctx, "x'(L)x''(L)");
        auto m = expand_sum(ctx, p, Convention::unordered);
        REQUIRE(m.size() == 3);
        CHECK(m.at(SplitIndex{{0}}) == 0);
        CHECK(m.at(SplitIndex{{1}}) == -1);
        CHECK(m.at(SplitIndex{{2}}) == -4);
    }
    SECTION("ordered indicator picks out one partition") {
        Context ctx = sections_ctx(4);
        CoeffPoly p = CoeffPoly::parse(ctx, "x'(s1)x'(s2)x''(s3)x''(s4)");
        auto m = expand_sum(ctx, p, Convention::ordered);
        for (const auto& [idx, c] : m)
            CHECK(c == (section_mask(ctx, idx) == 0b0011 ? 1 : 0));
    }
    SECTION("antisymmetric ordered sums cancel") {
        Context ctx = degree_ctx(0, 2);
        CoeffPoly p = CoeffPoly::parse(ctx, "x'(L) - x''(L)");
        for (const auto& [idx, c] : expand_sum(ctx, p, Convention::ordered)) {
            (void)idx;
            CHECK(c == 0);
        }
    }
    SECTION("unordered rejects asymmetric coefficients") {
        Context ctx = degree_ctx(0, 2);
        CHECK_THROWS_WITH(
            expand_sum(ctx, CoeffPoly::prime(ctx, ctx.require("L")), Convention::unordered),
            Catch::Matchers::ContainsSubstring("swap-symmetric"));
    }
}

TEST_CASE("ordered expansion doubles the symmetrization off the diagonal") {
    std::mt19937 rng(20250817);
    std::vector<Context> ctxs;
    ctxs.push_back(degree_ctx(2, 3));
    ctxs.push_back(degree_ctx(0, 3, 2));
    ctxs.push_back(sections_ctx(5));
    ctxs.push_back(degree_ctx(1, 2, 3, StabilityMode::deligne_mumford));

    for (const Context& ctx : ctxs) {
        for (int trial = 0; trial < 8; ++trial) {
            // Random polynomial of degree <= 3 over the coordinates.
            CoeffPoly p = CoeffPoly::constant(ctx, (long)(rng() % 7) - 3);
            for (int t = 0; t < 4; ++t) {
                CoeffPoly mono = CoeffPoly::constant(ctx, (long)(rng() % 9) - 4);
                for (int d = 0; d < 3; ++d) {
                    if (ctx.coords() == 0) break;
                    int v = (int)(rng() % ctx.coords());
                    if (rng() % 2) mono = mono * CoeffPoly::prime(ctx, v);
                }
                p += mono;
            }
            auto ord = expand_sum(ctx, p, Convention::ordered);
            auto sym = expand_sum(ctx, p.symmetrized(), Convention::unordered);
            auto ord_swapped = expand_sum(ctx, p.swapped(), Convention::ordered);
            REQUIRE(ord == ord_swapped);
            for (const auto& [idx, c] : ord)
                REQUIRE(c == (is_diagonal(ctx, idx) ? sym.at(idx) : 2 * sym.at(idx)));
        }
    }
}

TEST_CASE("section coordinates always induce a partition of the markings") {
    Context ctx = sections_ctx(5);
    for (const SplitIndex& idx : enumerate_indices(ctx)) {
        uint32_t a = section_mask(ctx, idx);
        uint32_t b = 0;
        for (int m = 1; m <= ctx.r(); ++m)
            if (idx.dp[ctx.section(m)] == 0) b |= 1u << (m - 1);
        CHECK((a | b) == 0b11111u);
        CHECK((a & b) == 0u);
    }
}

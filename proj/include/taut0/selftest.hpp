#pragma once
// The built-in acceptance suite.  Each criterion is an independent job
// returning pass/fail plus a one-line summary with deterministic counts, so
// the assembled report is byte-identical run to run regardless of how many
// worker threads execute it.

#include <atomic>
#include <functional>
#include <sstream>
#include <thread>

#include "taut0/vcb.hpp"
#include "taut0/verify.hpp"

namespace taut0 {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace selftest_detail {

inline CriterionResult oracle_consistency() {
    long pairings = 0;
    for (int n = 4; n <= 7; ++n) {
        MbarSpace sp(n);
        for (const auto& row : sp.keel_kernel_rows()) {
            MbarVector v(n, sp.dim());
            v.c = row;
            for (const FCurve& f : sp.fcurves()) {
                if (sp.fcurve_pair(f, v) != 0)
                    return {1, "oracle consistency", false,
                            "a relation-kernel vector has a nonzero curve pairing at n = " +
                                std::to_string(n)};
                ++pairings;
            }
        }
    }
    return {1, "oracle consistency", true,
            "every relation-kernel vector pairs to zero with every curve, 4 <= n <= 7 (" +
                std::to_string(pairings) + " pairings)"};
}

inline CriterionResult no_map_suite() {
    long instances = 0;
    for (int n = 4; n <= 7; ++n) {
        NoMapVerifier nv(n);
        const Context& ctx = nv.ctx();
        std::vector<std::pair<std::string, BaseExpr>> batch;
        auto sec = [&](int i) { return SymCombo::of(ctx, ctx.section(i)); };
        for (int i = 1; i <= n; ++i) {
            batch.emplace_back("rel3", rel3(ctx, i));
            batch.emplace_back("rel1", rel1(ctx, sec(i)));
            batch.emplace_back("rel10", rel10(ctx, sec(i)));
        }
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                batch.emplace_back("rel6", rel6(ctx, i, j));
                batch.emplace_back("rel2", rel2(ctx, sec(i), sec(j)));
                batch.emplace_back("rel4", rel4(ctx, i, sec(j)));
                batch.emplace_back("rel9", rel9(ctx, i, j));
            }
        batch.emplace_back("rel7", rel7(ctx));
        batch.emplace_back("rel8_first", rel8_first(ctx));
        batch.emplace_back("rel8_psi", rel8_psi(ctx));
        batch.emplace_back("rel8_sum", rel8_sum(ctx));
        for (const auto& [id, e] : batch) {
            if (!nv.verify_zero(e).zero_class())
                return {2, "no-map relation suite", false,
                        id + " does not specialize to the zero class at n = " +
                            std::to_string(n)};
            ++instances;
        }
    }
    return {2, "no-map relation suite", true,
            std::to_string(instances) +
                " relation instances specialize to the zero class under both oracles, "
                "4 <= n <= 7"};
}

inline CriterionResult desk_check() {
    MbarSpace sp(4);
    MbarVector lhs = 6 * sp.psi(1);
    MbarVector rhs = sp.zero();
    for (uint32_t mask : sp.basis()) rhs += 2 * sp.boundary(mask);
    bool ok = sp.is_zero_mod_relations(lhs - rhs) && sp.fcurves().size() == 1 &&
              sp.fcurve_pair(sp.fcurves()[0], lhs) == 6 &&
              sp.fcurve_pair(sp.fcurves()[0], rhs) == 6;
    return {3, "four-marking desk check", ok,
            ok ? "6 psi_1 matches twice the total boundary; both sides pair to 6 "
                 "with the unique curve"
               : "the four-marking psi identity fails"};
}

inline CriterionResult derivation_chains() {
    long checks = 0;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) throw input_error("derivation chain broke: " + what);
        ++checks;
    };

    {
        Context ctx = Context::make(
            2, {{"D1", SymbolKind::general, 2, Effectivity::abs(3), 0},
                {"D2", SymbolKind::general, -1, Effectivity::abs(3), 0}});
        SymCombo D1 = SymCombo::named(ctx, "D1"), D2 = SymCombo::named(ctx, "D2");
        expect(rel2(ctx, D1, D2) == rel1(ctx, D1 + D2) - rel1(ctx, D1) - rel1(ctx, D2),
               "rel2 polarization");
        for (int i = 1; i <= 2; ++i) {
            SymCombo si = SymCombo::of(ctx, ctx.section(i));
            Rat e = D1.degree();
            expect(rel4(ctx, i, D1) ==
                       e * rel2(ctx, D1, si) - rel1(ctx, D1) - e * e * rel3(ctx, i),
                   "rel4 from rel2, rel1, rel3");
        }
        expect(rel6(ctx, 1, 2) == rel3(ctx, 1) + rel3(ctx, 2) -
                                      rel2(ctx, SymCombo::of(ctx, ctx.section(1)),
                                           SymCombo::of(ctx, ctx.section(2))),
               "rel6 from rel2 and rel3");
    }

    for (int r = 2; r <= 6; ++r) {
        Context ctx = Context::make(r, {});
        BaseExpr sum = BaseExpr::zero(ctx);
        for (int j = 2; j <= r; ++j) sum -= rel6(ctx, 1, j);
        expect(rel7(ctx) == sum, "rel7 as a sum of rel6");
        SymCombo rest(ctx);
        for (int m = 2; m <= r; ++m) rest += SymCombo::of(ctx, ctx.section(m));
        expect(rel8_first(ctx) == rel4(ctx, 1, rest), "rel8_first from rel4");
        expect(rel8_psi(ctx) == rel7(ctx) - rel8_first(ctx), "rel8_psi from rel7");
        expect(rel8_sum(ctx) ==
                   Rat(r - 1) * rel8_first(ctx) + Rat(r) * rel8_psi(ctx),
               "rel8_sum from the other two forms");
        for (int i = 1; i <= r; ++i)
            for (int j = 1; j <= r; ++j)
                expect(rel9(ctx, i, j).is_zero(), "rel9 cancellation");
    }

    for (int r = 3; r <= 5; ++r) {
        Context ctx = Context::make(
            r, {{"D", SymbolKind::general, 3, Effectivity::abs(3), 0}});
        SymCombo D = SymCombo::named(ctx, "D");
        Rat e = D.degree();
        expect(rel10(ctx, D) == Rat((r - 1) * (r - 2)) * rel4(ctx, 1, D) +
                                    e * e * rel8_psi(ctx),
               "rel10 from rel4 and rel8_psi");
    }

    for (auto [e, r] : {std::pair<long, int>{3, 0}, {3, 2}, {0, 1}, {-2, 1}}) {
        Context ctx = Context::make(
            r, {{"D", SymbolKind::general, e, Effectivity::abs(3), 0}});
        SymCombo D = SymCombo::named(ctx, "D");
        expect(push_product(rel5(ctx, D), CurveExpr::sym(ctx, D)) ==
                   D.degree() * rel1(ctx, D),
               "rel1 from rel5 under the pushed product");
    }

    return {4, "derivation chains", true,
            std::to_string(checks) + " symbolic identities close exactly"};
}

inline CriterionResult q_pi_suite() {
    {
        Context ctx = Context::make(0, {{"L", SymbolKind::general, 1,
                                         Effectivity::abs(1), 0}});
        BaseExpr total = BaseExpr::boundary_sum(ctx, CoeffPoly::constant(ctx, 1),
                                                Convention::unordered);
        if (q_pi(CurveExpr::omega(ctx)) + rel1(ctx, detail::omega_combo(ctx)) != -total)
            return {5, "pushforward operator", false,
                    "the relative canonical class does not push to minus the boundary"};
    }
    {
        Context ctx = Context::make(0, {{"L", SymbolKind::general, 0,
                                         Effectivity::abs(10), 0}});
        SymCombo L = SymCombo::named(ctx, "L");
        BaseExpr residue = (q_pi(CurveExpr::sym(ctx, L)) - rel1(ctx, L)).expanded();
        BaseExpr expected = BaseExpr::zero(ctx);
        for (long a = 1; a <= 10; ++a)
            expected += Rat(-a * a) * BaseExpr::boundary(ctx, SplitIndex{{a}});
        if (residue != expected)
            return {5, "pushforward operator", false,
                    "degree-zero splittings do not carry minus-square coefficients"};
    }
    for (long e : {0L, 3L}) {
        Context ctx = Context::make(1, {{"L", SymbolKind::general, e,
                                         Effectivity::abs(3), 0}});
        SymCombo L = SymCombo::named(ctx, "L");
        BaseExpr x = BaseExpr::push_pp(ctx, ctx.require("L"), ctx.omega());
        CurveExpr twisted = CurveExpr::sym(ctx, L) + CurveExpr::base_pull(ctx, x);
        if (q_pi(twisted) - q_pi(CurveExpr::sym(ctx, L)) != 2 * Rat(e) * x)
            return {5, "pushforward operator", false,
                    "twisting by a pullback does not shift by twice the degree"};
    }
    return {5, "pushforward operator", true,
            "canonical-class push, degree-zero splitting weights, and pullback "
            "twists all match"};
}

inline CriterionResult vcb_assembly() {
    long cases = 0;
    for (int r = 0; r <= 5; ++r)
        for (auto [N, d] : {std::pair<int, long>{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
            long deg = -(N + 1) * d;
            Context ctx = Context::make(
                r, {{"K", SymbolKind::general, deg, Effectivity::abs(-deg), 0}});
            TargetData t = TargetData::of(ctx, N);
            DetClass vc = virtual_canonical(ctx, t);
            DetClass tx = tx_det(ctx, t);
            DetClass om = omega_sections_det(
                ctx, r >= 2 ? OmegaSectionsForm::boundary
                            : OmegaSectionsForm::self_intersection);
            if (vc.c1 != om.c1 + tx.c1 || vc.rank != (N + 1) * d + N + r - 3 ||
                vc.rank != tx.rank + r - 3)
                return {6, "determinant assembly", false,
                        "assembly fails at r = " + std::to_string(r) + ", N = " +
                            std::to_string(N) + ", d = " + std::to_string(d)};
            ++cases;
        }
    struct Row { int N; long d; int r; long rank; };
    for (auto [N, d, r, rank] :
         {Row{1, 1, 0, 0}, {2, 1, 0, 2}, {2, 2, 0, 5}, {3, 1, 2, 6}}) {
        long deg = -(N + 1) * d;
        Context ctx = Context::make(
            r, {{"K", SymbolKind::general, deg, Effectivity::abs(-deg), 0}});
        if (virtual_canonical(ctx, TargetData::of(ctx, N)).rank != rank)
            return {6, "determinant assembly", false,
                    "rank table mismatch at N = " + std::to_string(N)};
        ++cases;
    }
    return {6, "determinant assembly", true,
            std::to_string(cases) +
                " parameter points assemble exactly and match the rank table"};
}

inline CriterionResult filtration_arithmetic() {
    for (long a = 1; a <= 1000; ++a) {
        long sum = 0;
        std::vector<long> lens = filtration_lengths(a);
        if ((long)lens.size() != a)
            return {7, "filtration arithmetic", false,
                    "wrong piece count at a = " + std::to_string(a)};
        for (long piece : lens) sum += piece;
        if (sum != a * a)
            return {7, "filtration arithmetic", false,
                    "lengths do not sum to a^2 at a = " + std::to_string(a)};
    }
    return {7, "filtration arithmetic", true,
            "graded pieces sum to a^2 for every a up to 1000"};
}

}  // namespace selftest_detail

// Runs criteria 1..7 on `jobs` worker threads (at least one).  Results come
// back ordered by criterion id; a thrown exception fails its criterion.
inline std::vector<CriterionResult> run_acceptance(int jobs = 1) {
    using Job = std::function<CriterionResult()>;
    const std::vector<std::pair<std::string, Job>> plan = {
        {"oracle consistency", selftest_detail::oracle_consistency},
        {"no-map relation suite", selftest_detail::no_map_suite},
        {"four-marking desk check", selftest_detail::desk_check},
        {"derivation chains", selftest_detail::derivation_chains},
        {"pushforward operator", selftest_detail::q_pi_suite},
        {"determinant assembly", selftest_detail::vcb_assembly},
        {"filtration arithmetic", selftest_detail::filtration_arithmetic}};
    std::vector<CriterionResult> out(plan.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < plan.size(); i = next++) {
            try {
                out[i] = plan[i].second();
            } catch (const std::exception& err) {
                out[i] = {(int)i + 1, plan[i].first, false, err.what()};
            }
        }
    };
    if (jobs <= 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs && t < (int)plan.size(); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

inline std::string acceptance_text(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    int passed = 0;
    for (const CriterionResult& c : results) {
        os << (c.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": "
           << c.detail << "\n";
        if (c.pass) ++passed;
    }
    os << passed << "/" << results.size() << " criteria pass\n";
    return os.str();
}

inline bool all_pass(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& c : results)
        if (!c.pass) return false;
    return true;
}

}  // namespace taut0

// Command-line front end: context ingestion, relation and determinant
// computation, numerical verification, and machine-readable reports.
//
// Exit codes: 0 success (or verified zero class), 1 verified nonzero,
// 2 bad input or usage, 3 structurally valid input outside the supported
// calculus.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "taut0/graph.hpp"
#include "taut0/selftest.hpp"

using json = nlohmann::json;
using namespace taut0;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot read file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Context load_context(const std::string& path) { return parse_context(read_file(path)); }

void emit(bool as_json, const json& j, const std::string& text) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

// ---------------------------------------------------------------- relation

struct RelArgs {
    std::string ctx_path;
    std::string id;
    int i = 1;
    int j = 2;
    std::string symbol;
    std::string symbol2;
};

// Binds CLI parameters to a relation constructor.  Exactly one of the three
// result slots is filled: a base expression asserted to vanish, a curve-level
// expression asserted to vanish, or a determinant (rank and first Chern
// class) that vanishes nowhere but is the content of rel11.
struct BoundRelation {
    std::optional<BaseExpr> base;
    std::optional<CurveExpr> curve;
    std::optional<DetClass> det;
};

SymCombo named_or(const Context& ctx, const std::string& name,
                  const std::string& fallback) {
    return SymCombo::named(ctx, name.empty() ? fallback : name);
}

BoundRelation bind_relation(const Context& ctx, const RelArgs& a) {
    BoundRelation out;
    if (a.id == "rel1") {
        out.base = rel1(ctx, named_or(ctx, a.symbol, "s1"));
    } else if (a.id == "rel2") {
        out.base = rel2(ctx, named_or(ctx, a.symbol, "s1"), named_or(ctx, a.symbol2, "s2"));
    } else if (a.id == "rel3") {
        out.base = rel3(ctx, a.i);
    } else if (a.id == "rel4") {
        out.base = rel4(ctx, a.i, named_or(ctx, a.symbol, "s2"));
    } else if (a.id == "rel5") {
        out.curve = rel5(ctx, named_or(ctx, a.symbol, "s1"));
    } else if (a.id == "rel6") {
        out.base = rel6(ctx, a.i, a.j);
    } else if (a.id == "rel7") {
        out.base = rel7(ctx);
    } else if (a.id == "rel8_first") {
        out.base = rel8_first(ctx);
    } else if (a.id == "rel8_psi") {
        out.base = rel8_psi(ctx);
    } else if (a.id == "rel8_sum") {
        out.base = rel8_sum(ctx);
    } else if (a.id == "rel9") {
        out.base = rel9(ctx, a.i, a.j);
    } else if (a.id == "rel10") {
        out.base = rel10(ctx, named_or(ctx, a.symbol, "s2"), a.i);
    } else if (a.id == "rel11") {
        out.det = rel11_det(ctx);
    } else {
        throw input_error("unknown relation id '" + a.id +
                          "' (expected rel1..rel7, rel8_first, rel8_psi, "
                          "rel8_sum, rel9, rel10, rel11)");
    }
    return out;
}

int run_relation(const RelArgs& a, bool as_json) {
    Context ctx = load_context(a.ctx_path);
    BoundRelation r = bind_relation(ctx, a);
    json j{{"id", a.id}};
    std::string text;
    if (r.det) {
        j["rank"] = r.det->rank;
        j["c1"] = r.det->c1.render();
        text = "rank " + std::to_string(r.det->rank) + "\nc1 = " + r.det->c1.render() + "\n";
    } else if (r.curve) {
        j["level"] = "curve";
        j["expr"] = r.curve->render();
        text = r.curve->render() + "\n";
    } else {
        j["level"] = "base";
        j["expr"] = r.base->render();
        text = r.base->render() + "\n";
    }
    emit(as_json, j, text);
    return 0;
}

// ------------------------------------------------------------------ expand

int run_expand(const std::string& ctx_path, const std::string& expr, bool curve,
               bool boundary, const std::string& push, int section_pull,
               bool as_json) {
    Context ctx = load_context(ctx_path);
    json j;
    std::string text;
    if (!push.empty() || section_pull > 0) {
        if (!curve)
            throw input_error("--push and --section-pull act on total-space "
                              "expressions; pass --curve");
        if (!push.empty() && section_pull > 0)
            throw input_error("--push and --section-pull are exclusive");
        CurveExpr e = CurveExpr::parse(ctx, expr);
        BaseExpr down = push.empty()
                            ? sect_pull(section_pull, e)
                            : push_product(e, CurveExpr::parse(ctx, push));
        j["level"] = "base";
        j["canonical"] = down.render();
        text = down.render() + "\n";
        if (boundary) {
            BaseExpr flat = down.expanded();
            j["expanded"] = flat.render();
            text += flat.render() + "\n";
        }
    } else if (curve) {
        if (boundary)
            throw input_error("--boundary expands base-level sums; curve-level "
                              "expressions keep their two orientations");
        CurveExpr e = CurveExpr::parse(ctx, expr);
        j["level"] = "curve";
        j["canonical"] = e.render();
        text = e.render() + "\n";
    } else {
        BaseExpr e = BaseExpr::parse(ctx, expr);
        j["level"] = "base";
        j["canonical"] = e.render();
        text = e.render() + "\n";
        if (boundary) {
            BaseExpr flat = e.expanded();
            j["expanded"] = flat.render();
            text += flat.render() + "\n";
        }
    }
    emit(as_json, j, text);
    return 0;
}

// --------------------------------------------------------------------- vcb

int run_vcb(const std::string& ctx_path, int dim_x, long deg_k, int markings,
            bool as_json) {
    Context ctx = ctx_path.empty()
                      ? Context::make(markings,
                                      {{"K", SymbolKind::general, deg_k,
                                        Effectivity::abs(std::labs(deg_k)), 0}})
                      : load_context(ctx_path);
    if (!ctx_path.empty()) {
        if (ctx.r() != markings)
            throw input_error("--markings is " + std::to_string(markings) +
                              " but the context declares " + std::to_string(ctx.r()) +
                              " sections");
        int K = ctx.require("K");
        if (ctx.symbols()[(size_t)K].degree != deg_k)
            throw input_error("--deg-k is " + std::to_string(deg_k) +
                              " but the context declares degree " +
                              std::to_string(ctx.symbols()[(size_t)K].degree) +
                              " for K");
    }
    TargetData t = TargetData::of(ctx, dim_x);
    DetClass vc = virtual_canonical(ctx, t);
    DetClass tx = tx_det(ctx, t);
    DetClass om = omega_sections_det(ctx, ctx.r() >= 2
                                              ? OmegaSectionsForm::boundary
                                              : OmegaSectionsForm::self_intersection);
    json j{{"rank", vc.rank},
           {"c1", vc.c1.render()},
           {"anticanonical_degree", anticanonical_degree(ctx, t)},
           {"tangent_piece", {{"rank", tx.rank}, {"c1", tx.c1.render()}}},
           {"log_differentials_piece", {{"rank", om.rank}, {"c1", om.c1.render()}}}};
    std::string text = "rank " + std::to_string(vc.rank) + "\nc1 = " + vc.c1.render() + "\n";
    emit(as_json, j, text);
    return 0;
}

// ------------------------------------------------------------- verify-mbar

int run_verify(const RelArgs& a, const std::string& raw, int n, bool as_json) {
    if (a.id.empty() == raw.empty())
        throw input_error("pass exactly one of --relation and --expr");
    NoMapVerifier nv(n);
    BaseExpr e = BaseExpr::zero(nv.ctx());
    if (!a.id.empty()) {
        BoundRelation r = bind_relation(nv.ctx(), a);
        if (!r.base)
            throw input_error("'" + a.id + "' is not a base-level vanishing class");
        e = *r.base;
    } else {
        e = BaseExpr::parse(nv.ctx(), raw);
    }
    MbarZeroReport rep = nv.verify_zero(e);
    std::string label = a.id.empty() ? "expression" : a.id;
    json j{{"relation", label},
           {"n", n},
           {"expr", e.render()},
           {"relation_zero", rep.relation_zero},
           {"fcurve_zero", rep.fcurve_zero},
           {"zero_class", rep.zero_class()},
           {"witness", rep.witness}};
    std::ostringstream text;
    if (a.id.empty())
        text << "expression with " << n << " markings\n";
    else
        text << "relation " << label << " with " << n << " markings\n";
    text << "expr = " << e.render() << "\n"
         << "reduction against the relation span: "
         << (rep.relation_zero ? "zero" : "NONZERO") << "\n"
         << "curve pairings: " << (rep.fcurve_zero ? "all zero" : "NONZERO") << "\n"
         << "verdict: " << (rep.zero_class() ? "zero class" : "NOT the zero class")
         << "\n";
    if (!rep.witness.empty()) text << "witness: " << rep.witness << "\n";
    emit(as_json, j, text.str());
    return rep.zero_class() ? 0 : 1;
}

// ------------------------------------------------------------------- graph

int run_graph(const std::string& path, const std::string& contract, bool as_json) {
    ParsedGraph p = parse_graph(read_file(path));
    json j{{"graph", render_graph(p.graph, p.dec)},
           {"fingerprint", canonical_string(p.graph, p.dec)},
           {"vertices", p.graph.vertices.size()},
           {"edges", p.graph.edges.size()},
           {"tails", p.graph.tails.size()}};
    std::string text = render_graph(p.graph, p.dec) + "fingerprint " +
                       canonical_string(p.graph, p.dec) + "\n";
    if (!contract.empty()) {
        std::set<int> edges;
        std::istringstream in(contract);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                size_t used = 0;
                int e = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                edges.insert(e);
            } catch (const std::logic_error&) {
                throw input_error("--contract wants a comma-separated list of "
                                  "edge indices, got '" + tok + "'");
            }
        }
        Contraction c = contract_edges(p.graph, edges);
        std::optional<Decoration> dec;
        if (p.dec) dec = contract_decoration(c, *p.dec);
        j["contracted"] = render_graph(c.dst, dec);
        j["contracted_fingerprint"] = canonical_string(c.dst, dec);
        text += "contracted along " + std::to_string(edges.size()) + " edge(s)\n" +
                render_graph(c.dst, dec) + "fingerprint " + canonical_string(c.dst, dec) +
                "\n";
    }
    emit(as_json, j, text);
    return 0;
}

// ---------------------------------------------------------------- selftest

int run_selftest(int jobs, bool as_json) {
    std::vector<CriterionResult> results = run_acceptance(jobs);
    if (as_json) {
        json arr = json::array();
        for (const CriterionResult& c : results)
            arr.push_back({{"id", c.id},
                           {"name", c.name},
                           {"pass", c.pass},
                           {"detail", c.detail}});
        emit(true, json{{"criteria", arr}, {"pass", all_pass(results)}}, "");
    } else {
        std::cout << acceptance_text(results);
    }
    return all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact divisor-class engine for families of rational curves"};
    app.require_subcommand(1);

    std::string report = "text";

    RelArgs rel;
    CLI::App* c_rel = app.add_subcommand(
        "relation", "print a divisor-class relation bound to a context");
    c_rel->add_option("id", rel.id, "relation id (rel1..rel11)")->required();
    c_rel->add_option("--ctx", rel.ctx_path, "context file")->required();
    c_rel->add_option("--i", rel.i, "first marking (default 1)");
    c_rel->add_option("--j", rel.j, "second marking (default 2)");
    c_rel->add_option("--symbol", rel.symbol, "divisor symbol argument");
    c_rel->add_option("--symbol2", rel.symbol2, "second divisor symbol argument");

    std::string x_ctx, x_expr, x_push;
    bool x_curve = false, x_boundary = false;
    int x_spull = 0;
    CLI::App* c_exp = app.add_subcommand("expand", "canonicalize an expression");
    c_exp->add_option("--ctx", x_ctx, "context file")->required();
    c_exp->add_option("--expr", x_expr, "expression text")->required();
    c_exp->add_flag("--curve", x_curve, "parse on the total space instead of the base");
    c_exp->add_flag("--boundary", x_boundary,
                    "also expand boundary sums into explicit classes");
    c_exp->add_option("--push", x_push,
                      "multiply by a second total-space expression and push to the base");
    c_exp->add_option("--section-pull", x_spull,
                      "pull the expression back along the given section");

    std::string v_ctx;
    int v_dim = 0, v_markings = 0;
    long v_deg = 0;
    CLI::App* c_vcb = app.add_subcommand(
        "vcb", "rank and first Chern class of the virtual canonical bundle");
    c_vcb->add_option("--ctx", v_ctx, "context file (must declare K; optional)");
    c_vcb->add_option("--dim-x", v_dim, "target dimension")->required();
    c_vcb->add_option("--deg-k", v_deg, "fiber degree of the pulled-back canonical class")
        ->required();
    c_vcb->add_option("--markings", v_markings, "number of sections")->required();

    RelArgs vm;
    std::string vm_expr;
    int vm_n = 0;
    CLI::App* c_ver = app.add_subcommand(
        "verify-mbar", "specialize a relation and test it against both oracles");
    c_ver->add_option("--relation", vm.id, "relation id");
    c_ver->add_option("--expr", vm_expr, "raw section-only expression to verify");
    c_ver->add_option("--n", vm_n, "marking count (4..16)")->required();
    c_ver->add_option("--i", vm.i, "first marking (default 1)");
    c_ver->add_option("--j", vm.j, "second marking (default 2)");
    c_ver->add_option("--symbol", vm.symbol, "divisor symbol argument");
    c_ver->add_option("--symbol2", vm.symbol2, "second divisor symbol argument");

    std::string g_file, g_contract;
    CLI::App* c_gra = app.add_subcommand("graph", "validate and fingerprint a graph file");
    c_gra->add_option("--file", g_file, "graph file")->required();
    c_gra->add_option("--contract", g_contract, "edge indices to contract (comma list)");

    int s_jobs = 1;
    CLI::App* c_self = app.add_subcommand("selftest", "run the acceptance suite");
    c_self->add_option("--jobs", s_jobs, "worker threads (default 1)")
        ->check(CLI::Range(1, 64));

    for (CLI::App* sub : {c_rel, c_exp, c_vcb, c_ver, c_gra, c_self})
        sub->add_option("--report", report, "output form: text or json")
            ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
        bool as_json = report == "json";
        if (*c_rel) return run_relation(rel, as_json);
        if (*c_exp)
            return run_expand(x_ctx, x_expr, x_curve, x_boundary, x_push, x_spull, as_json);
        if (*c_vcb) return run_vcb(v_ctx, v_dim, v_deg, v_markings, as_json);
        if (*c_ver) return run_verify(vm, vm_expr, vm_n, as_json);
        if (*c_gra) return run_graph(g_file, g_contract, as_json);
        if (*c_self) return run_selftest(s_jobs, as_json);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const fragment_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

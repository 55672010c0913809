#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "taut0/errors.hpp"

// Finite graphs of the kind that index boundary strata: vertices carry a
// genus, edges are undirected and may be loops or parallel, and tails carry
// pairwise distinct marking labels.  Contractions collapse subgraphs onto
// vertices with the genus absorbing the first Betti number of whatever got
// collapsed; inclusions realize one graph inside another.  Integer
// decorations ride along contravariantly (liftings) and covariantly (sums
// over preimages).

namespace taut0 {

struct GraphVertex {
    int id = 0;
    int genus = 0;
};

struct ModularGraph {
    std::vector<GraphVertex> vertices;       // sorted by id
    std::vector<std::pair<int, int>> edges;  // (min,max) vertex ids, sorted; loops allowed
    std::vector<std::pair<int, int>> tails;  // (marking, vertex id), sorted by marking

    bool has_vertex(int id) const {
        for (const auto& v : vertices)
            if (v.id == id) return true;
        return false;
    }
    int genus_of(int id) const {
        for (const auto& v : vertices)
            if (v.id == id) return v.genus;
        throw input_error("unknown vertex id " + std::to_string(id));
    }
};

// Integer decoration: one value per vertex id.
struct Decoration {
    std::map<int, long> a;
    bool operator==(const Decoration&) const = default;
};

inline void normalize_graph(ModularGraph& g) {
    std::sort(g.vertices.begin(), g.vertices.end(),
              [](const GraphVertex& x, const GraphVertex& y) { return x.id < y.id; });
    for (auto& e : g.edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(g.edges.begin(), g.edges.end());
    std::sort(g.tails.begin(), g.tails.end());
}

inline void validate_graph(const ModularGraph& g) {
    std::set<int> ids;
    for (const auto& v : g.vertices) {
        if (!ids.insert(v.id).second)
            throw input_error("duplicate vertex id " + std::to_string(v.id));
        if (v.genus < 0) throw input_error("negative genus on vertex " + std::to_string(v.id));
    }
    if (ids.empty()) throw input_error("graph has no vertices");
    for (const auto& e : g.edges)
        if (!ids.count(e.first) || !ids.count(e.second))
            throw input_error("edge references missing vertex");
    std::set<int> marks;
    for (const auto& t : g.tails) {
        if (!ids.count(t.second)) throw input_error("tail references missing vertex");
        if (!marks.insert(t.first).second)
            throw input_error("duplicate marking " + std::to_string(t.first));
    }
}

namespace detail {
struct DSU {
    std::map<int, int> parent;
    int find(int x) {
        if (!parent.count(x)) parent[x] = x;
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    }
    void unite(int x, int y) {
        // Keep the smallest id as representative so quotient labels are stable.
        x = find(x), y = find(y);
        if (x == y) return;
        if (y < x) std::swap(x, y);
        parent[y] = x;
    }
};
}  // namespace detail

// A contraction src -> dst.  emap has one entry per src edge: the index of
// the dst edge it maps to, or -1 when the edge is collapsed.
struct Contraction {
    ModularGraph src, dst;
    std::map<int, int> vmap;
    std::vector<int> emap;
};

inline void validate_contraction(const Contraction& c) {
    validate_graph(c.src);
    validate_graph(c.dst);
    for (const auto& v : c.src.vertices)
        if (!c.vmap.count(v.id)) throw input_error("vertex map misses vertex " + std::to_string(v.id));
    if (c.vmap.size() != c.src.vertices.size())
        throw input_error("vertex map mentions vertices outside the source");
    std::set<int> image;
    for (const auto& [s, d] : c.vmap) {
        (void)s;
        if (!c.dst.has_vertex(d)) throw input_error("vertex map leaves the target");
        image.insert(d);
    }
    if (image.size() != c.dst.vertices.size())
        throw input_error("contraction is not surjective on vertices");

    if (c.emap.size() != c.src.edges.size()) throw input_error("edge map has wrong length");
    std::vector<int> hit(c.dst.edges.size(), 0);
    for (size_t e = 0; e < c.src.edges.size(); ++e) {
        int u = c.vmap.at(c.src.edges[e].first), w = c.vmap.at(c.src.edges[e].second);
        if (c.emap[e] == -1) {
            if (u != w)
                throw input_error("contracted edge " + std::to_string(e) +
                                  " has endpoints mapping to distinct vertices");
        } else {
            if (c.emap[e] < 0 || c.emap[e] >= (int)c.dst.edges.size())
                throw input_error("edge map index out of range");
            auto f = c.dst.edges[c.emap[e]];
            if (std::minmax(u, w) != std::minmax(f.first, f.second))
                throw input_error("edge " + std::to_string(e) + " maps to an incompatible edge");
            hit[c.emap[e]] += 1;
        }
    }
    for (size_t f = 0; f < hit.size(); ++f)
        if (hit[f] != 1)
            throw input_error("target edge " + std::to_string(f) +
                              " is covered " + std::to_string(hit[f]) + " times");

    // Tails correspond bijectively, preserving markings.
    if (c.src.tails.size() != c.dst.tails.size()) throw input_error("tail counts differ");
    for (const auto& t : c.src.tails) {
        std::pair<int, int> want{t.first, c.vmap.at(t.second)};
        if (!std::binary_search(c.dst.tails.begin(), c.dst.tails.end(), want))
            throw input_error("tail with marking " + std::to_string(t.first) +
                              " does not map to a matching tail");
    }

    // Genus bookkeeping: each target vertex absorbs the genera of its
    // preimage plus the first Betti number of the collapsed subgraph.
    for (const auto& w : c.dst.vertices) {
        long gsum = 0, nedges = 0;
        detail::DSU dsu;
        std::vector<int> pre;
        for (const auto& v : c.src.vertices)
            if (c.vmap.at(v.id) == w.id) {
                pre.push_back(v.id);
                dsu.find(v.id);
                gsum += v.genus;
            }
        for (size_t e = 0; e < c.src.edges.size(); ++e)
            if (c.emap[e] == -1 && c.vmap.at(c.src.edges[e].first) == w.id) {
                dsu.unite(c.src.edges[e].first, c.src.edges[e].second);
                ++nedges;
            }
        std::set<int> comps;
        for (int v : pre) comps.insert(dsu.find(v));
        long b1 = nedges - (long)pre.size() + (long)comps.size();
        if (w.genus != gsum + b1)
            throw input_error("genus of target vertex " + std::to_string(w.id) +
                              " violates additivity (expected " + std::to_string(gsum + b1) + ")");
    }
}

// Builds the contraction of src along the given edge indices; the target
// vertex of each collapsed class is labeled by its smallest member.
inline Contraction contract_edges(const ModularGraph& src, const std::set<int>& edge_idx) {
    validate_graph(src);
    for (int e : edge_idx)
        if (e < 0 || e >= (int)src.edges.size())
            throw input_error("edge index " + std::to_string(e) + " out of range");
    Contraction c;
    c.src = src;
    detail::DSU dsu;
    for (const auto& v : src.vertices) dsu.find(v.id);
    for (int e : edge_idx) dsu.unite(src.edges[e].first, src.edges[e].second);
    for (const auto& v : src.vertices) c.vmap[v.id] = dsu.find(v.id);

    std::map<int, GraphVertex> tv;
    for (const auto& v : src.vertices) {
        GraphVertex& w = tv[c.vmap[v.id]];
        w.id = c.vmap[v.id];
        w.genus += v.genus;
    }
    // Each class is connected by construction (it is a component of the
    // contracted-edge subgraph), so its first Betti number is E - V + 1.
    {
        std::map<int, long> edges_in, verts_in;
        for (int e : edge_idx) edges_in[c.vmap[src.edges[e].first]] += 1;
        for (const auto& v : src.vertices) verts_in[c.vmap[v.id]] += 1;
        for (auto& [id, w] : tv) w.genus += (int)(edges_in[id] - verts_in[id] + 1);
    }
    for (auto& [id, w] : tv) c.dst.vertices.push_back(w);

    std::vector<std::pair<std::pair<int, int>, int>> mapped;  // (edge, src index)
    for (size_t e = 0; e < src.edges.size(); ++e) {
        if (edge_idx.count((int)e)) continue;
        int u = c.vmap[src.edges[e].first], w = c.vmap[src.edges[e].second];
        mapped.push_back({std::minmax(u, w), (int)e});
    }
    std::sort(mapped.begin(), mapped.end());
    c.emap.assign(src.edges.size(), -1);
    for (size_t f = 0; f < mapped.size(); ++f) {
        c.dst.edges.push_back(mapped[f].first);
        c.emap[mapped[f].second] = (int)f;
    }
    for (const auto& t : src.tails) c.dst.tails.push_back({t.first, c.vmap[t.second]});
    normalize_graph(c.dst);
    // normalize_graph sorts dst.edges; mapped was already sorted the same way.
    validate_contraction(c);
    return c;
}

inline Contraction compose(const Contraction& outer, const Contraction& inner) {
    Contraction c;
    c.src = inner.src;
    c.dst = outer.dst;
    for (const auto& [v, w] : inner.vmap) c.vmap[v] = outer.vmap.at(w);
    c.emap.resize(inner.emap.size());
    for (size_t e = 0; e < inner.emap.size(); ++e)
        c.emap[e] = inner.emap[e] == -1 ? -1 : outer.emap.at(inner.emap[e]);
    return c;
}

// An inclusion src -> dst: injective on vertices and edges, genus
// preserving, marking preserving on tails (dst may have more of everything).
struct GraphInclusion {
    ModularGraph src, dst;
    std::map<int, int> vmap;
    std::vector<int> emap;
};

inline void validate_inclusion(const GraphInclusion& inc) {
    validate_graph(inc.src);
    validate_graph(inc.dst);
    std::set<int> vimage;
    for (const auto& v : inc.src.vertices) {
        if (!inc.vmap.count(v.id)) throw input_error("inclusion misses vertex " + std::to_string(v.id));
        int w = inc.vmap.at(v.id);
        if (!inc.dst.has_vertex(w)) throw input_error("inclusion leaves the target");
        if (!vimage.insert(w).second) throw input_error("inclusion is not injective on vertices");
        if (inc.dst.genus_of(w) != v.genus)
            throw input_error("inclusion changes genus at vertex " + std::to_string(v.id));
    }
    if (inc.emap.size() != inc.src.edges.size()) throw input_error("edge map has wrong length");
    std::set<int> eimage;
    for (size_t e = 0; e < inc.src.edges.size(); ++e) {
        int f = inc.emap[e];
        if (f < 0 || f >= (int)inc.dst.edges.size()) throw input_error("edge map index out of range");
        if (!eimage.insert(f).second) throw input_error("inclusion is not injective on edges");
        int u = inc.vmap.at(inc.src.edges[e].first), w = inc.vmap.at(inc.src.edges[e].second);
        if (std::minmax(u, w) != std::minmax(inc.dst.edges[f].first, inc.dst.edges[f].second))
            throw input_error("edge " + std::to_string(e) + " maps to an incompatible edge");
    }
    for (const auto& t : inc.src.tails) {
        std::pair<int, int> want{t.first, inc.vmap.at(t.second)};
        if (!std::binary_search(inc.dst.tails.begin(), inc.dst.tails.end(), want))
            throw input_error("tail with marking " + std::to_string(t.first) +
                              " is not present in the target");
    }
}

struct PullbackResult {
    ModularGraph graph;          // the fiber product
    Contraction to_included;     // contraction onto the included graph
    GraphInclusion into_source;  // inclusion into the contraction's source
};

// Fiber product of a contraction phi: s2 -> s1 with an inclusion
// inc: s3 -> s1: the full phi-preimage of the included subgraph, which
// contracts onto s3 and includes into s2.
inline PullbackResult pullback(const Contraction& phi, const GraphInclusion& inc) {
    validate_contraction(phi);
    validate_inclusion(inc);
    std::map<int, int> vert_back;  // s1 vertex -> s3 vertex
    for (const auto& [v, w] : inc.vmap) vert_back[w] = v;
    std::map<int, int> edge_back;  // s1 edge index -> s3 edge index
    for (size_t e = 0; e < inc.emap.size(); ++e) edge_back[inc.emap[e]] = (int)e;
    std::set<int> marks3;
    for (const auto& t : inc.src.tails) marks3.insert(t.first);

    PullbackResult out;
    ModularGraph& g4 = out.graph;
    for (const auto& v : phi.src.vertices)
        if (vert_back.count(phi.vmap.at(v.id))) g4.vertices.push_back(v);
    std::vector<int> from_s2_edge;  // g4 edge -> s2 edge index, pre-normalize
    for (size_t e = 0; e < phi.src.edges.size(); ++e) {
        bool keep;
        if (phi.emap[e] == -1)
            keep = vert_back.count(phi.vmap.at(phi.src.edges[e].first)) > 0;
        else
            keep = edge_back.count(phi.emap[e]) > 0;
        if (keep) {
            g4.edges.push_back(phi.src.edges[e]);
            from_s2_edge.push_back((int)e);
        }
    }
    for (const auto& t : phi.src.tails)
        if (marks3.count(t.first)) g4.tails.push_back(t);
    // Edges entered in s2 order, which is already sorted, so no re-sort is
    // needed and from_s2_edge stays aligned.
    validate_graph(g4);

    out.to_included.src = g4;
    out.to_included.dst = inc.src;
    for (const auto& v : g4.vertices)
        out.to_included.vmap[v.id] = vert_back.at(phi.vmap.at(v.id));
    for (size_t e = 0; e < g4.edges.size(); ++e) {
        int phi_e = phi.emap[from_s2_edge[e]];
        out.to_included.emap.push_back(phi_e == -1 ? -1 : edge_back.at(phi_e));
    }
    validate_contraction(out.to_included);

    out.into_source.src = g4;
    out.into_source.dst = phi.src;
    for (const auto& v : g4.vertices) out.into_source.vmap[v.id] = v.id;
    out.into_source.emap = from_s2_edge;
    validate_inclusion(out.into_source);
    return out;
}

// Pushes a decoration forward along a contraction: each target vertex gets
// the sum over its preimage.
inline Decoration contract_decoration(const Contraction& c, const Decoration& d) {
    for (const auto& v : c.src.vertices)
        if (!d.a.count(v.id))
            throw input_error("decoration misses vertex " + std::to_string(v.id));
    Decoration out;
    for (const auto& w : c.dst.vertices) out.a[w.id] = 0;
    for (const auto& v : c.src.vertices) out.a[c.vmap.at(v.id)] += d.a.at(v.id);
    return out;
}

// All source decorations within the per-vertex bounds that push forward to
// the given target decoration, in lexicographic order along increasing
// source vertex id.
inline std::vector<Decoration> enumerate_liftings(const Contraction& c, const Decoration& target,
                                                  const std::map<int, std::pair<long, long>>& bounds) {
    for (const auto& w : c.dst.vertices)
        if (!target.a.count(w.id))
            throw input_error("target decoration misses vertex " + std::to_string(w.id));
    for (const auto& v : c.src.vertices) {
        auto it = bounds.find(v.id);
        if (it == bounds.end())
            throw input_error("no bounds for vertex " + std::to_string(v.id));
        if (it->second.first > it->second.second)
            throw input_error("empty bound interval on vertex " + std::to_string(v.id));
    }
    std::vector<Decoration> out;
    Decoration cur;
    std::map<int, long> remaining;  // per target vertex, total still to place
    for (const auto& w : c.dst.vertices) remaining[w.id] = target.a.at(w.id);
    std::map<int, long> slots;  // source vertices not yet assigned, per block
    for (const auto& v : c.src.vertices) slots[c.vmap.at(v.id)] += 1;

    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == c.src.vertices.size()) {
            for (const auto& [w, rem] : remaining)
                if (rem != 0) return;
            out.push_back(cur);
            return;
        }
        int v = c.src.vertices[i].id, w = c.vmap.at(v);
        auto [lo, hi] = bounds.at(v);
        slots[w] -= 1;
        for (long x = lo; x <= hi; ++x) {
            // Feasibility: the rest of the block must be able to absorb the
            // remainder.  With zero slots left the remainder must be exact.
            long rem = remaining[w] - x;
            // A quick bound using this block's loosest interval would do, but
            // exact pruning is cheap: sum of min/max over unassigned slots.
            long lo_sum = 0, hi_sum = 0;
            for (size_t j = i + 1; j < c.src.vertices.size(); ++j)
                if (c.vmap.at(c.src.vertices[j].id) == w) {
                    lo_sum += bounds.at(c.src.vertices[j].id).first;
                    hi_sum += bounds.at(c.src.vertices[j].id).second;
                }
            if (rem < lo_sum || rem > hi_sum) continue;
            cur.a[v] = x;
            remaining[w] = rem;
            self(self, i + 1);
            remaining[w] = rem + x;
        }
        cur.a.erase(v);
        slots[w] += 1;
    };
    rec(rec, 0);
    return out;
}

// Label-independent fingerprint: the lexicographically smallest rendering
// over all relabelings.  Factorial in the vertex count, meant for the small
// graphs that appear in tests and demos.
inline std::string canonical_string(const ModularGraph& g,
                                    const std::optional<Decoration>& dec = std::nullopt) {
    validate_graph(g);
    if (g.vertices.size() > 8) throw input_error("canonical form limited to 8 vertices");
    std::vector<int> ids;
    for (const auto& v : g.vertices) ids.push_back(v.id);
    std::vector<int> perm(ids.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = (int)i;
    std::string best;
    do {
        std::map<int, int> relabel;
        for (size_t i = 0; i < ids.size(); ++i) relabel[ids[i]] = perm[i];
        std::ostringstream os;
        std::vector<std::pair<int, const GraphVertex*>> vs;
        for (const auto& v : g.vertices) vs.push_back({relabel[v.id], &v});
        std::sort(vs.begin(), vs.end());
        for (const auto& [nid, v] : vs) {
            os << "v" << nid << "g" << v->genus;
            if (dec) os << "a" << dec->a.at(v->id);
            os << ";";
        }
        std::vector<std::pair<int, int>> es;
        for (const auto& e : g.edges) es.push_back(std::minmax(relabel[e.first], relabel[e.second]));
        std::sort(es.begin(), es.end());
        for (const auto& e : es) os << "e" << e.first << "," << e.second << ";";
        for (const auto& t : g.tails) os << "t" << t.first << "@" << relabel[t.second] << ";";
        std::string s = os.str();
        if (best.empty() || s < best) best = s;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

struct ParsedGraph {
    ModularGraph graph;
    std::optional<Decoration> dec;
};

inline ParsedGraph parse_graph(const std::string& text) {
    ParsedGraph out;
    Decoration dec;
    size_t decorated = 0;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw input_error("graph line " + std::to_string(lineno) + ": " + msg);
    };
    auto num_after = [&](const std::string& tok, const std::string& key) -> long {
        if (tok.rfind(key, 0) != 0) fail("expected '" + key + "<int>', got '" + tok + "'");
        try {
            size_t used = 0;
            long v = std::stol(tok.substr(key.size()), &used);
            if (used != tok.size() - key.size()) fail("trailing junk in '" + tok + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad integer in '" + tok + "'");
        }
        return 0;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) {
            if (t[0] == '#') break;
            tok.push_back(t);
        }
        if (tok.empty()) continue;
        if (tok[0] == "v") {
            if (tok.size() != 3 && tok.size() != 4) fail("vertex line needs 'v <id> g=<genus> [a=<int>]'");
            GraphVertex v;
            v.id = (int)num_after(tok[1], "");
            v.genus = (int)num_after(tok[2], "g=");
            out.graph.vertices.push_back(v);
            if (tok.size() == 4) {
                dec.a[v.id] = num_after(tok[3], "a=");
                ++decorated;
            }
        } else if (tok[0] == "e") {
            if (tok.size() != 3) fail("edge line needs 'e <id1> <id2>'");
            out.graph.edges.push_back({(int)num_after(tok[1], ""), (int)num_after(tok[2], "")});
        } else if (tok[0] == "t") {
            if (tok.size() != 3) fail("tail line needs 't <id> m=<marking>'");
            int v = (int)num_after(tok[1], "");
            int m = (int)num_after(tok[2], "m=");
            out.graph.tails.push_back({m, v});
        } else {
            fail("unknown directive '" + tok[0] + "'");
        }
    }
    if (decorated != 0 && decorated != out.graph.vertices.size())
        throw input_error("decoration must cover all vertices or none");
    normalize_graph(out.graph);
    validate_graph(out.graph);
    if (decorated) out.dec = dec;
    return out;
}

inline std::string render_graph(const ModularGraph& g,
                                const std::optional<Decoration>& dec = std::nullopt) {
    std::ostringstream os;
    for (const auto& v : g.vertices) {
        os << "v " << v.id << " g=" << v.genus;
        if (dec) os << " a=" << dec->a.at(v.id);
        os << "\n";
    }
    for (const auto& e : g.edges) os << "e " << e.first << " " << e.second << "\n";
    for (const auto& t : g.tails) os << "t " << t.second << " m=" << t.first << "\n";
    return os.str();
}

}  // namespace taut0

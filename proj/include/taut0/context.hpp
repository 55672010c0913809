#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "taut0/errors.hpp"

// A context fixes what a splitting of the family into two halves tracks:
// r marked sections (each meeting a fiber once, so their relative degree is
// 1 and a splitting puts them on one side or the other), any number of
// general divisor symbols with integer relative degree, and the relative
// canonical class omega, which is implicit, unique, and of total degree -2.
//
// Symbols are indexed with sections first (s1..sr), then general symbols in
// declaration order, then omega last.  All splitting machinery works over
// the non-canonical symbols only ("coordinates"); omega never splits, its
// per-side bookkeeping being fixed at -1 per side where a rule needs it.

namespace taut0 {

enum class StabilityMode { artin, deligne_mumford };
enum class SymbolKind { section, general, canonical };

struct Effectivity {
    enum class Kind { unbounded, nonneg, abs_bound, list };
    Kind kind = Kind::unbounded;
    long bound = 0;
    std::vector<long> parts;

    static Effectivity none() { return {}; }
    static Effectivity nonneg() { return {Kind::nonneg, 0, {}}; }
    static Effectivity abs(long b) { return {Kind::abs_bound, b, {}}; }
    static Effectivity of_list(std::vector<long> p) {
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        return {Kind::list, 0, std::move(p)};
    }

    bool is_bounded() const { return kind != Kind::unbounded; }

    // Allowed first-side degrees d' for a symbol of total degree e; both
    // parts d' and e - d' must satisfy the constraint, so the result is
    // symmetric under d' -> e - d'.
    std::vector<long> primed_values(long e, const std::string& name) const {
        std::vector<long> out;
        switch (kind) {
            case Kind::unbounded:
                throw input_error("unbounded expansion: symbol '" + name +
                                  "' needs an effectivity bound");
            case Kind::nonneg:
                for (long d = 0; d <= e; ++d) out.push_back(d);
                break;
            case Kind::abs_bound:
                for (long d = std::max(-bound, e - bound); d <= std::min(bound, e + bound); ++d)
                    out.push_back(d);
                break;
            case Kind::list:
                for (long d : parts)
                    if (std::binary_search(parts.begin(), parts.end(), e - d)) out.push_back(d);
                break;
        }
        return out;
    }

    std::string render() const {
        switch (kind) {
            case Kind::unbounded: return "unbounded";
            case Kind::nonneg: return "nonneg";
            case Kind::abs_bound: return "bound " + std::to_string(bound);
            case Kind::list: {
                std::string s = "parts ";
                for (size_t i = 0; i < parts.size(); ++i)
                    s += (i ? "," : "") + std::to_string(parts[i]);
                return s;
            }
        }
        return "";
    }

    static Effectivity parse(const std::string& text) {
        std::istringstream in(text);
        std::string head;
        in >> head;
        if (head == "nonneg") {
            std::string rest;
            if (in >> rest) throw input_error("junk after 'nonneg'");
            return nonneg();
        }
        if (head == "bound") {
            long b;
            if (!(in >> b) || b < 0) throw input_error("'bound' needs a nonnegative integer");
            std::string rest;
            if (in >> rest) throw input_error("junk after bound value");
            return abs(b);
        }
        if (head == "parts") {
            std::string rest;
            if (!(in >> rest)) throw input_error("'parts' needs a comma-separated list");
            std::string tail;
            if (in >> tail) throw input_error("junk after parts list");
            std::vector<long> vals;
            std::istringstream ps(rest);
            std::string item;
            while (std::getline(ps, item, ',')) {
                try {
                    size_t used = 0;
                    vals.push_back(std::stol(item, &used));
                    if (used != item.size()) throw input_error("bad integer '" + item + "'");
                } catch (const std::logic_error&) {
                    throw input_error("bad integer '" + item + "' in parts list");
                }
            }
            if (vals.empty()) throw input_error("'parts' needs at least one value");
            return of_list(std::move(vals));
        }
        throw input_error("unknown effectivity '" + text + "' (want nonneg | bound N | parts a,b,...)");
    }
};

struct TrackedSymbol {
    std::string name;
    SymbolKind kind = SymbolKind::general;
    long degree = 0;
    Effectivity eff;
    int marking = 0;  // sections only
};

class Context {
public:
    StabilityMode mode = StabilityMode::artin;
    bool disjoint_sections = true;

    static Context make(int r, const std::vector<TrackedSymbol>& generals,
                        StabilityMode mode = StabilityMode::artin, bool disjoint = true) {
        if (r < 0) throw input_error("section count must be nonnegative");
        Context c;
        c.mode = mode;
        c.disjoint_sections = disjoint;
        c.r_ = r;
        for (int i = 1; i <= r; ++i)
            c.syms_.push_back({"s" + std::to_string(i), SymbolKind::section, 1,
                               Effectivity::none(), i});
        for (const TrackedSymbol& g : generals) {
            check_name(g.name);
            if (g.kind != SymbolKind::general)
                throw input_error("only general symbols may be declared");
            for (const TrackedSymbol& s : c.syms_)
                if (s.name == g.name) throw input_error("duplicate symbol '" + g.name + "'");
            c.syms_.push_back(g);
        }
        c.syms_.push_back({"omega", SymbolKind::canonical, -2, Effectivity::none(), 0});
        return c;
    }

    int r() const { return r_; }
    const std::vector<TrackedSymbol>& symbols() const { return syms_; }
    size_t coords() const { return syms_.size() - 1; }  // all but omega
    int omega() const { return (int)syms_.size() - 1; }

    const TrackedSymbol& sym(int i) const { return syms_.at(i); }
    long degree(int i) const { return syms_.at(i).degree; }
    bool is_section(int i) const { return syms_.at(i).kind == SymbolKind::section; }
    bool is_omega(int i) const { return syms_.at(i).kind == SymbolKind::canonical; }

    int section(int marking) const {
        if (marking < 1 || marking > r_)
            throw input_error("marking " + std::to_string(marking) + " out of range (r = " +
                              std::to_string(r_) + ")");
        return marking - 1;
    }

    int find(const std::string& name) const {
        for (size_t i = 0; i < syms_.size(); ++i)
            if (syms_[i].name == name) return (int)i;
        return -1;
    }

    int require(const std::string& name) const {
        int i = find(name);
        if (i < 0) throw input_error("unknown symbol '" + name + "'");
        return i;
    }

private:
    std::vector<TrackedSymbol> syms_;
    int r_ = 0;

    static void check_name(const std::string& n) {
        if (n.empty() || (!isalpha((unsigned char)n[0]) && n[0] != '_'))
            throw input_error("bad symbol name '" + n + "'");
        for (char ch : n)
            if (!isalnum((unsigned char)ch) && ch != '_')
                throw input_error("bad symbol name '" + n + "'");
        static const char* reserved[] = {"omega", "psi", "c2", "Sum", "Delta", "pi", "x"};
        for (const char* w : reserved)
            if (n == w) throw input_error("'" + n + "' is a reserved name");
        if (n[0] == 's') {
            bool digits = n.size() > 1;
            for (size_t i = 1; i < n.size(); ++i)
                if (!isdigit((unsigned char)n[i])) digits = false;
            if (digits) throw input_error("names of the form s<number> are reserved for sections");
        }
    }
};

// Context files are a small TOML subset: [mode] / [sections] / [symbols] /
// [effectivity] tables with scalar assignments.  See README for the schema.
inline Context parse_context(const std::string& text) {
    struct Entry {
        std::string key, value;
        bool quoted = false;
        int line, col;
    };
    std::map<std::string, std::vector<Entry>> tables;
    std::vector<std::string> order;  // symbol declaration order
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        std::string table;
        while (std::getline(in, line)) {
            ++lineno;
            // Strip comments, respecting quotes.
            bool quote = false;
            for (size_t i = 0; i < line.size(); ++i) {
                if (line[i] == '"') quote = !quote;
                if (line[i] == '#' && !quote) {
                    line = line.substr(0, i);
                    break;
                }
            }
            size_t b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            size_t e = line.find_last_not_of(" \t\r");
            std::string body = line.substr(b, e - b + 1);
            if (body.front() == '[') {
                if (body.back() != ']')
                    throw input_error("context file line " + std::to_string(lineno) +
                                      ", column " + std::to_string(b + 1) + ": unterminated table header");
                table = body.substr(1, body.size() - 2);
                if (table != "mode" && table != "sections" && table != "symbols" &&
                    table != "effectivity")
                    throw input_error("context file line " + std::to_string(lineno) +
                                      ": unknown table [" + table + "]");
                continue;
            }
            size_t eq = body.find('=');
            if (eq == std::string::npos)
                throw input_error("context file line " + std::to_string(lineno) + ", column " +
                                  std::to_string(b + 1) + ": expected 'key = value'");
            auto trim = [](std::string s) {
                size_t x = s.find_first_not_of(" \t");
                size_t y = s.find_last_not_of(" \t");
                return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
            };
            Entry ent;
            ent.key = trim(body.substr(0, eq));
            ent.value = trim(body.substr(eq + 1));
            ent.line = lineno;
            ent.col = (int)(b + eq + 2);
            if (ent.key.empty() || ent.value.empty())
                throw input_error("context file line " + std::to_string(lineno) + ", column " +
                                  std::to_string(ent.col) + ": expected 'key = value'");
            if (ent.value.front() == '"') {
                if (ent.value.size() < 2 || ent.value.back() != '"')
                    throw input_error("context file line " + std::to_string(lineno) + ", column " +
                                      std::to_string(ent.col) + ": unterminated string");
                ent.value = ent.value.substr(1, ent.value.size() - 2);
                ent.quoted = true;
            }
            if (table.empty())
                throw input_error("context file line " + std::to_string(lineno) +
                                  ": assignment outside any table");
            tables[table].push_back(ent);
            if (table == "symbols") order.push_back(ent.key);
        }
    }

    auto fail_at = [](const Entry& e, const std::string& msg) -> void {
        throw input_error("context file line " + std::to_string(e.line) + ", column " +
                          std::to_string(e.col) + ": " + msg);
    };

    StabilityMode mode = StabilityMode::artin;
    bool disjoint = true;
    for (const Entry& e : tables["mode"]) {
        if (e.key == "stability") {
            if (e.value == "artin")
                mode = StabilityMode::artin;
            else if (e.value == "deligne-mumford")
                mode = StabilityMode::deligne_mumford;
            else
                fail_at(e, "stability must be \"artin\" or \"deligne-mumford\"");
        } else if (e.key == "disjoint_sections") {
            if (e.value == "true")
                disjoint = true;
            else if (e.value == "false")
                disjoint = false;
            else
                fail_at(e, "disjoint_sections must be true or false");
        } else {
            fail_at(e, "unknown key '" + e.key + "' in [mode]");
        }
    }

    int r = 0;
    for (const Entry& e : tables["sections"]) {
        if (e.key != "count") fail_at(e, "unknown key '" + e.key + "' in [sections]");
        try {
            size_t used = 0;
            r = std::stoi(e.value, &used);
            if (used != e.value.size() || r < 0) fail_at(e, "count must be a nonnegative integer");
        } catch (const std::logic_error&) {
            fail_at(e, "count must be a nonnegative integer");
        }
    }

    std::map<std::string, TrackedSymbol> gens;
    for (const Entry& e : tables["symbols"]) {
        if (gens.count(e.key)) fail_at(e, "symbol '" + e.key + "' declared twice");
        TrackedSymbol t;
        t.name = e.key;
        t.kind = SymbolKind::general;
        try {
            size_t used = 0;
            t.degree = std::stol(e.value, &used);
            if (used != e.value.size()) fail_at(e, "degree must be an integer");
        } catch (const std::logic_error&) {
            fail_at(e, "degree must be an integer");
        }
        gens[e.key] = t;
    }
    for (const Entry& e : tables["effectivity"]) {
        auto it = gens.find(e.key);
        if (it == gens.end()) fail_at(e, "effectivity for undeclared symbol '" + e.key + "'");
        try {
            it->second.eff = Effectivity::parse(e.value);
        } catch (const input_error& err) {
            fail_at(e, err.what());
        }
    }

    std::vector<TrackedSymbol> decl;
    for (const std::string& name : order) decl.push_back(gens.at(name));
    try {
        return Context::make(r, decl, mode, disjoint);
    } catch (const input_error& err) {
        throw input_error(std::string("context file: ") + err.what());
    }
}

}  // namespace taut0

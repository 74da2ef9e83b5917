#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dagclust/clustering.hpp"
#include "dagclust/dag.hpp"
#include "dagclust/error.hpp"
#include "dagclust/reductions.hpp"

namespace dagclust {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

namespace detail {

inline std::string position_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, position_of(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
    }
}

inline void check_schema(const json& doc) {
    if (!doc.is_object()) throw Error(Errc::ParseError, "top level: expected an object");
    if (!doc.contains("schema_version")) throw Error(Errc::ParseError, "schema_version: missing");
    const json& v = doc["schema_version"];
    if (!v.is_number_integer()) throw Error(Errc::ParseError, "schema_version: expected an integer");
    if (v.get<std::int64_t>() != kSchemaVersion)
        throw Error(Errc::SchemaVersionUnsupported, "schema_version " + v.dump() + " (supported: 1)");
}

inline std::int64_t get_int(const json& obj, const char* key, const std::string& where,
                            std::optional<std::int64_t> fallback = std::nullopt, std::int64_t min = 0) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw Error(Errc::ParseError, where + "." + key + ": missing");
    }
    const json& v = obj[key];
    if (!v.is_number_integer()) throw Error(Errc::ParseError, where + "." + key + ": expected an integer");
    auto x = v.get<std::int64_t>();
    if (x < min) throw Error(Errc::ParseError, where + "." + key + ": must be at least " + std::to_string(min));
    return x;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Instance files
//
// {"arcs": [[tail, head], ...],
//  "nodes": [{"delay": 0, "id": 0, "label": "s", "weight": 1}, ...],
//  "params": {"D": 2, "capacity": 2, "d": 1, "include_node_delays": true},
//  "schema_version": 1}
//
// Keys are emitted sorted and compact, so emit(parse(emit(x))) == emit(x).

inline json instance_to_json(const Instance& inst) {
    json nodes = json::array();
    for (NodeId v = 0; v < inst.dag.node_count(); ++v) {
        json n{{"id", v}, {"weight", inst.dag.weight(v)}, {"delay", inst.dag.delay(v)}};
        if (!inst.dag.label(v).empty()) n["label"] = inst.dag.label(v);
        nodes.push_back(std::move(n));
    }
    json arcs = json::array();
    for (const Arc& a : inst.dag.arcs()) arcs.push_back({a.tail, a.head});
    const DelayParams& p = inst.params;
    return {{"schema_version", kSchemaVersion},
            {"nodes", std::move(nodes)},
            {"arcs", std::move(arcs)},
            {"params", {{"d", p.d}, {"D", p.D}, {"capacity", p.capacity}, {"include_node_delays", p.include_node_delays}}}};
}

inline std::string emit_instance(const Instance& inst) { return instance_to_json(inst).dump(); }

/// Node ids may be any distinct nonnegative integers; sparse ids are
/// remapped to their rank and a warning is appended to `warnings`.
inline Instance parse_instance(std::string_view text, std::vector<std::string>* warnings = nullptr) {
    const json doc = detail::parse_json(text);
    detail::check_schema(doc);
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw Error(Errc::ParseError, "nodes: expected an array");
    if (!doc.contains("arcs") || !doc["arcs"].is_array()) throw Error(Errc::ParseError, "arcs: expected an array");
    if (!doc.contains("params") || !doc["params"].is_object()) throw Error(Errc::ParseError, "params: expected an object");

    std::map<std::int64_t, NodeAttrs> by_id;
    for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
        const json& n = doc["nodes"][i];
        const std::string where = "nodes[" + std::to_string(i) + "]";
        if (!n.is_object()) throw Error(Errc::ParseError, where + ": expected an object");
        const std::int64_t id = detail::get_int(n, "id", where);
        NodeAttrs attrs;
        attrs.weight = detail::get_int(n, "weight", where, 1);
        attrs.delay = detail::get_int(n, "delay", where, 0);
        if (n.contains("label")) {
            if (!n["label"].is_string()) throw Error(Errc::ParseError, where + ".label: expected a string");
            attrs.label = n["label"].get<std::string>();
        }
        if (!by_id.emplace(id, std::move(attrs)).second)
            throw Error(Errc::ParseError, where + ".id: duplicate id " + std::to_string(id));
    }
    std::map<std::int64_t, NodeId> dense;
    std::vector<NodeAttrs> nodes;
    for (auto& [id, attrs] : by_id) {
        dense[id] = static_cast<NodeId>(nodes.size());
        nodes.push_back(std::move(attrs));
    }
    if (!by_id.empty() && by_id.rbegin()->first != static_cast<std::int64_t>(by_id.size()) - 1 && warnings)
        warnings->push_back("node ids are not dense; remapped to 0.." + std::to_string(by_id.size() - 1) +
                            " in increasing id order");

    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < doc["arcs"].size(); ++i) {
        const json& a = doc["arcs"][i];
        const std::string where = "arcs[" + std::to_string(i) + "]";
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
            throw Error(Errc::ParseError, where + ": expected [tail, head]");
        auto t = dense.find(a[0].get<std::int64_t>());
        auto h = dense.find(a[1].get<std::int64_t>());
        if (t == dense.end() || h == dense.end())
            throw Error(Errc::ParseError, where + " " + a.dump() + ": refers to an unknown node id");
        arcs.push_back({t->second, h->second});
    }

    const json& p = doc["params"];
    DelayParams params;
    params.d = detail::get_int(p, "d", "params");
    params.D = detail::get_int(p, "D", "params");
    params.capacity = detail::get_int(p, "capacity", "params", std::nullopt, 1);
    if (p.contains("include_node_delays")) {
        if (!p["include_node_delays"].is_boolean())
            throw Error(Errc::ParseError, "params.include_node_delays: expected a boolean");
        params.include_node_delays = p["include_node_delays"].get<bool>();
    }
    auto w = check_params(params);
    if (warnings) warnings->insert(warnings->end(), w.begin(), w.end());
    return {build_dag(std::move(nodes), std::move(arcs)), params};
}

// ---------------------------------------------------------------------------
// Clustering files: {"clusters": [[0, 1], [2], ...], "schema_version": 1}

inline json clustering_to_json(const Clustering& c) {
    json clusters = json::array();
    for (const auto& block : c.blocks()) clusters.push_back(block);
    return {{"schema_version", kSchemaVersion}, {"clusters", std::move(clusters)}};
}

inline std::string emit_clustering(const Clustering& c) { return clustering_to_json(c).dump(); }

/// Members are node ids, or labels when `inst` is given. With an instance
/// the clusters must cover its node set exactly (NodeSetMismatch otherwise);
/// without one they must cover 0..max id.
inline Clustering parse_clustering(std::string_view text, const Instance* inst = nullptr) {
    const json doc = detail::parse_json(text);
    detail::check_schema(doc);
    if (!doc.contains("clusters") || !doc["clusters"].is_array())
        throw Error(Errc::ParseError, "clusters: expected an array");
    std::vector<std::vector<NodeId>> blocks;
    std::int64_t max_id = -1;
    for (std::size_t i = 0; i < doc["clusters"].size(); ++i) {
        const json& b = doc["clusters"][i];
        const std::string where = "clusters[" + std::to_string(i) + "]";
        if (!b.is_array()) throw Error(Errc::ParseError, where + ": expected an array");
        std::vector<NodeId> block;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const json& m = b[j];
            const std::string at = where + "[" + std::to_string(j) + "]";
            if (m.is_number_integer() && m.get<std::int64_t>() >= 0) {
                block.push_back(static_cast<NodeId>(m.get<std::int64_t>()));
            } else if (m.is_string() && inst) {
                auto v = inst->dag.find_label(m.get<std::string>());
                if (!v) throw Error(Errc::NodeSetMismatch, at + ": unknown label " + m.dump());
                block.push_back(*v);
            } else {
                throw Error(Errc::ParseError, at + ": expected a node id" + std::string(inst ? " or label" : ""));
            }
            max_id = std::max<std::int64_t>(max_id, block.back());
        }
        blocks.push_back(std::move(block));
    }
    const std::size_t n = inst ? inst->dag.node_count() : static_cast<std::size_t>(max_id + 1);
    return Clustering::from_blocks(n, blocks);
}

// ---------------------------------------------------------------------------
// DIMACS CNF

/// `c` comment lines, one `p cnf <vars> <clauses>` header, then signed
/// literals with each clause terminated by 0. A `%` line ends the input.
inline CnfFormula parse_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::size_t declared = 0;
    CnfFormula f;
    std::vector<int> current;
    auto fail = [&](const std::string& msg) { throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream tok(line);
        std::string first;
        if (!(tok >> first)) continue;
        if (first[0] == 'c') continue;
        if (first == "%") break;
        if (first == "p") {
            if (header) fail("second header");
            std::string fmt;
            long long vars = -1, clauses = -1;
            if (!(tok >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0)
                fail("expected 'p cnf <vars> <clauses>'");
            std::string extra;
            if (tok >> extra) fail("trailing text after header");
            f.num_vars = static_cast<std::size_t>(vars);
            declared = static_cast<std::size_t>(clauses);
            header = true;
            continue;
        }
        if (!header) fail("clause before the 'p cnf' header");
        std::istringstream lits(line);
        std::string word;
        while (lits >> word) {
            long long lit = 0;
            try {
                std::size_t used = 0;
                lit = std::stoll(word, &used);
                if (used != word.size()) throw std::invalid_argument(word);
            } catch (const std::exception&) {
                fail("'" + word + "' is not a literal");
            }
            if (lit == 0) {
                f.clauses.push_back(std::move(current));
                current.clear();
            } else {
                if (static_cast<std::size_t>(std::llabs(lit)) > f.num_vars)
                    fail("literal " + word + " exceeds the declared " + std::to_string(f.num_vars) + " variables");
                current.push_back(static_cast<int>(lit));
            }
        }
    }
    if (!header) throw Error(Errc::ParseError, "missing 'p cnf' header");
    if (!current.empty()) throw Error(Errc::ParseError, "last clause is not terminated by 0");
    if (f.clauses.size() != declared)
        throw Error(Errc::ParseError, "header declares " + std::to_string(declared) + " clauses, found " +
                                          std::to_string(f.clauses.size()));
    return f;
}

inline std::string emit_dimacs(const CnfFormula& f) {
    std::string out = "p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const auto& c : f.clauses) {
        for (int lit : c) out += std::to_string(lit) + " ";
        out += "0\n";
    }
    return out;
}

} // namespace dagclust

#pragma once

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dagclust/error.hpp"

namespace dagclust {

using NodeId = std::uint32_t;
using ArcIndex = std::size_t;

struct Arc {
    NodeId tail = 0;
    NodeId head = 0;

    friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Undirected edge of the underlying simple graph, normalized so `u < v`.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

    bool touches(NodeId x) const noexcept { return u == x || v == x; }
    bool adjacent_to(const Edge& o) const noexcept {
        return touches(o.u) || touches(o.v);
    }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct NodeAttrs {
    std::int64_t weight = 1;
    std::int64_t delay = 0;
    std::string label;
};

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// A source-to-sink (or any) walk through the DAG, stored as its node
/// sequence. A single node is a path with zero arcs.
struct Path {
    std::vector<NodeId> nodes;

    std::size_t arc_count() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }

    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) out.push_back({nodes[i], nodes[i + 1]});
        return out;
    }

    friend bool operator==(const Path&, const Path&) = default;
};

class Dag;
Dag build_dag(std::vector<NodeAttrs> nodes, std::vector<Arc> arcs);

/// Immutable validated DAG. Node ids are dense in `[0, node_count())`.
/// Per-node arc lists are sorted by the opposite endpoint so every traversal
/// visits neighbours lowest id first.
class Dag {
public:
    Dag() = default;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t arc_count() const noexcept { return arcs_.size(); }

    std::span<const Arc> arcs() const noexcept { return arcs_; }
    const Arc& arc(ArcIndex i) const { return arcs_.at(i); }

    const NodeAttrs& attrs(NodeId v) const { return nodes_.at(v); }
    std::span<const NodeAttrs> node_attrs() const noexcept { return nodes_; }
    std::int64_t weight(NodeId v) const { return nodes_.at(v).weight; }
    std::int64_t delay(NodeId v) const { return nodes_.at(v).delay; }
    const std::string& label(NodeId v) const { return nodes_.at(v).label; }

    /// Label if present, otherwise the decimal id.
    std::string display_name(NodeId v) const {
        const auto& l = nodes_.at(v).label;
        return l.empty() ? std::to_string(v) : l;
    }

    std::optional<NodeId> find_label(std::string_view label) const {
        for (NodeId v = 0; v < nodes_.size(); ++v)
            if (nodes_[v].label == label) return v;
        return std::nullopt;
    }

    std::span<const ArcIndex> out_arcs(NodeId v) const { return out_.at(v); }
    std::span<const ArcIndex> in_arcs(NodeId v) const { return in_.at(v); }
    std::size_t fanin(NodeId v) const { return in_.at(v).size(); }
    std::size_t fanout(NodeId v) const { return out_.at(v).size(); }

    std::optional<ArcIndex> find_arc(NodeId tail, NodeId head) const {
        if (tail >= nodes_.size()) return std::nullopt;
        for (ArcIndex a : out_[tail])
            if (arcs_[a].head == head) return a;
        return std::nullopt;
    }

    /// Kahn order; among ready nodes the lowest id goes first.
    std::span<const NodeId> topological_order() const noexcept { return topo_; }

    friend bool operator==(const Dag& a, const Dag& b) {
        if (a.nodes_.size() != b.nodes_.size() || a.arcs_ != b.arcs_) return false;
        for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
            const auto& x = a.nodes_[i];
            const auto& y = b.nodes_[i];
            if (x.weight != y.weight || x.delay != y.delay || x.label != y.label) return false;
        }
        return true;
    }

private:
    friend Dag build_dag(std::vector<NodeAttrs> nodes, std::vector<Arc> arcs);

    std::vector<NodeAttrs> nodes_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<ArcIndex>> out_;
    std::vector<std::vector<ArcIndex>> in_;
    std::vector<NodeId> topo_;
};

namespace detail {

// Called only when Kahn's algorithm left nodes unordered; every such node
// lies on or downstream of a cycle, so following unordered predecessors
// must revisit a node.
inline std::vector<NodeId> find_cycle(const std::vector<Arc>& arcs,
                                      const std::vector<std::vector<ArcIndex>>& in,
                                      const std::vector<bool>& ordered) {
    NodeId start = 0;
    while (ordered[start]) ++start;
    std::vector<int> seen_at(ordered.size(), -1);
    std::vector<NodeId> walk;
    NodeId v = start;
    while (seen_at[v] < 0) {
        seen_at[v] = static_cast<int>(walk.size());
        walk.push_back(v);
        for (ArcIndex a : in[v]) {
            if (!ordered[arcs[a].tail]) {
                v = arcs[a].tail;
                break;
            }
        }
    }
    std::vector<NodeId> cycle(walk.begin() + seen_at[v], walk.end());
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
}

} // namespace detail

/// Validates and freezes a DAG. Arc order is preserved as given.
/// Throws InvalidArc for out-of-range endpoints, self-loops and duplicate
/// arcs, and CycleDetected (naming one cycle) when no topological order exists.
inline Dag build_dag(std::vector<NodeAttrs> nodes, std::vector<Arc> arcs) {
    const std::size_t n = nodes.size();
    for (NodeId v = 0; v < n; ++v) {
        if (nodes[v].weight < 0 || nodes[v].delay < 0)
            throw Error(Errc::PreconditionViolated,
                        "node " + std::to_string(v) + " has a negative weight or delay");
    }
    std::set<Arc> seen;
    for (const Arc& a : arcs) {
        const std::string what = "(" + std::to_string(a.tail) + "," + std::to_string(a.head) + ")";
        if (a.tail >= n || a.head >= n) throw Error(Errc::InvalidArc, "arc " + what + " has an endpoint out of range");
        if (a.tail == a.head) throw Error(Errc::InvalidArc, "arc " + what + " is a self-loop");
        if (!seen.insert(a).second) throw Error(Errc::InvalidArc, "arc " + what + " is duplicated");
    }

    Dag g;
    g.out_.assign(n, {});
    g.in_.assign(n, {});
    for (ArcIndex i = 0; i < arcs.size(); ++i) {
        g.out_[arcs[i].tail].push_back(i);
        g.in_[arcs[i].head].push_back(i);
    }
    for (auto& list : g.out_)
        std::sort(list.begin(), list.end(), [&](ArcIndex x, ArcIndex y) { return arcs[x].head < arcs[y].head; });
    for (auto& list : g.in_)
        std::sort(list.begin(), list.end(), [&](ArcIndex x, ArcIndex y) { return arcs[x].tail < arcs[y].tail; });

    std::vector<std::size_t> indeg(n);
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < n; ++v) {
        indeg[v] = g.in_[v].size();
        if (indeg[v] == 0) ready.push(v);
    }
    std::vector<bool> ordered(n, false);
    while (!ready.empty()) {
        NodeId v = ready.top();
        ready.pop();
        ordered[v] = true;
        g.topo_.push_back(v);
        for (ArcIndex a : g.out_[v])
            if (--indeg[arcs[a].head] == 0) ready.push(arcs[a].head);
    }
    if (g.topo_.size() != n) {
        auto cycle = detail::find_cycle(arcs, g.in_, ordered);
        std::string msg = "cycle";
        for (NodeId v : cycle) msg += " " + std::to_string(v);
        msg += " " + std::to_string(cycle.front());
        throw Error(Errc::CycleDetected, msg);
    }

    g.nodes_ = std::move(nodes);
    g.arcs_ = std::move(arcs);
    return g;
}

/// Convenience overload: `n` nodes with unit weight and zero delay.
inline Dag build_dag(std::size_t n, std::vector<Arc> arcs) {
    return build_dag(std::vector<NodeAttrs>(n), std::move(arcs));
}

inline std::vector<NodeId> sources(const Dag& g) {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.fanin(v) == 0) out.push_back(v);
    return out;
}

inline std::vector<NodeId> sinks(const Dag& g) {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.fanout(v) == 0) out.push_back(v);
    return out;
}

inline std::vector<NodeId> topological_order(const Dag& g) {
    auto order = g.topological_order();
    return {order.begin(), order.end()};
}

/// True when consecutive nodes are joined by arcs and no node repeats.
inline bool is_path_of(const Dag& g, const Path& p) {
    if (p.nodes.empty()) return false;
    std::set<NodeId> seen;
    for (NodeId v : p.nodes)
        if (v >= g.node_count() || !seen.insert(v).second) return false;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
        if (!g.find_arc(p.nodes[i], p.nodes[i + 1])) return false;
    return true;
}

/// Longest path by arc count using only arcs for which `allowed(arc_index)`
/// holds. Among all longest paths the lexicographically smallest node
/// sequence is returned. With no allowed arc the result is the single node 0;
/// an empty DAG yields an empty path.
template <std::predicate<ArcIndex> Allowed>
Path longest_path(const Dag& g, Allowed&& allowed) {
    const std::size_t n = g.node_count();
    if (n == 0) return {};
    // reach[v]: arcs on the longest allowed path starting at v.
    std::vector<std::size_t> reach(n, 0);
    auto order = g.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeId v = *it;
        for (ArcIndex a : g.out_arcs(v))
            if (allowed(a)) reach[v] = std::max(reach[v], reach[g.arc(a).head] + 1);
    }
    NodeId v = 0;
    for (NodeId u = 0; u < n; ++u)
        if (reach[u] > reach[v]) v = u;
    Path p{{v}};
    while (reach[v] > 0) {
        // out_arcs is sorted by head, so the first match is the smallest id.
        for (ArcIndex a : g.out_arcs(v)) {
            NodeId h = g.arc(a).head;
            if (allowed(a) && reach[h] + 1 == reach[v]) {
                v = h;
                break;
            }
        }
        p.nodes.push_back(v);
    }
    return p;
}

inline Path longest_path(const Dag& g) {
    return longest_path(g, [](ArcIndex) { return true; });
}

inline std::size_t longest_path_length(const Dag& g) { return longest_path(g).arc_count(); }

/// Orientation-free view of a DAG.
class SimpleGraph {
public:
    SimpleGraph() = default;
    SimpleGraph(std::size_t n, std::vector<Edge> edges) : adj_(n) {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);
        for (const Edge& e : edges_) {
            if (e.v >= n || e.u == e.v) throw Error(Errc::InvalidArc, "bad undirected edge");
            adj_[e.u].push_back(e.v);
            adj_[e.v].push_back(e.u);
        }
        for (auto& list : adj_) std::sort(list.begin(), list.end());
    }

    std::size_t node_count() const noexcept { return adj_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId v) const { return adj_.at(v); }
    std::size_t degree(NodeId v) const { return adj_.at(v).size(); }

    std::size_t max_degree() const {
        std::size_t best = 0;
        for (const auto& list : adj_) best = std::max(best, list.size());
        return best;
    }

    bool has_edge(NodeId a, NodeId b) const {
        if (a >= adj_.size()) return false;
        return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
    }

    /// Connected and acyclic, i.e. connected with n - 1 edges.
    bool is_tree() const {
        const std::size_t n = adj_.size();
        if (n == 0 || edges_.size() != n - 1) return false;
        std::vector<bool> seen(n, false);
        std::vector<NodeId> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : adj_[v])
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    stack.push_back(w);
                }
        }
        return count == n;
    }

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adj_;
};

inline SimpleGraph underlying_simple_graph(const Dag& g) {
    std::vector<Edge> edges;
    edges.reserve(g.arc_count());
    for (const Arc& a : g.arcs()) edges.emplace_back(a.tail, a.head);
    return SimpleGraph(g.node_count(), std::move(edges));
}

/// Number of source-to-sink paths, saturating at `limit`.
inline std::size_t count_st_paths(const Dag& g, std::size_t limit = SIZE_MAX) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> ways(n, 0);
    auto order = g.topological_order();
    std::size_t total = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeId v = *it;
        if (g.fanout(v) == 0) {
            ways[v] = 1;
        } else {
            std::size_t w = 0;
            for (ArcIndex a : g.out_arcs(v)) w = std::min(limit, w + ways[g.arc(a).head]);
            ways[v] = w;
        }
        if (g.fanin(v) == 0) total = std::min(limit, total + ways[v]);
    }
    return total;
}

/// Calls `visit(const Path&)` once per source-to-sink path: sources in
/// increasing id, then depth-first with the smallest head first.
/// Throws PathExplosion before visiting anything if there are more than `cap` paths.
template <class Visitor>
void for_each_st_path(const Dag& g, Visitor&& visit, std::size_t cap = kDefaultPathCap) {
    const std::size_t total = count_st_paths(g, cap == SIZE_MAX ? cap : cap + 1);
    if (total > cap)
        throw Error(Errc::PathExplosion, "more than " + std::to_string(cap) + " source-sink paths");
    Path current;
    std::function<void(NodeId)> dfs = [&](NodeId v) {
        current.nodes.push_back(v);
        if (g.fanout(v) == 0) {
            visit(std::as_const(current));
        } else {
            for (ArcIndex a : g.out_arcs(v)) dfs(g.arc(a).head);
        }
        current.nodes.pop_back();
    };
    for (NodeId s : sources(g)) dfs(s);
}

inline std::vector<Path> enumerate_st_paths(const Dag& g, std::size_t cap = kDefaultPathCap) {
    std::vector<Path> out;
    for_each_st_path(g, [&](const Path& p) { out.push_back(p); }, cap);
    return out;
}

} // namespace dagclust

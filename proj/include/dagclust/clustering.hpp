#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dagclust/dag.hpp"
#include "dagclust/error.hpp"

namespace dagclust {

using ClusterId = std::uint32_t;
using Delay = std::int64_t;

/// Two-level delay model. `d` is charged on arcs inside a cluster, `D` on
/// arcs crossing clusters; `capacity` bounds each cluster's summed weight.
struct DelayParams {
    Delay d = 1;
    Delay D = 2;
    std::int64_t capacity = 2;
    bool include_node_delays = true;

    friend bool operator==(const DelayParams&, const DelayParams&) = default;
};

/// Hard errors for malformed parameters; returns soft warnings.
inline std::vector<std::string> check_params(const DelayParams& p) {
    if (p.d < 0 || p.D < 0) throw Error(Errc::PreconditionViolated, "delays d and D must be nonnegative");
    if (p.capacity <= 0) throw Error(Errc::PreconditionViolated, "capacity must be positive");
    std::vector<std::string> warnings;
    if (p.D < p.d)
        warnings.push_back("inter-cluster delay D=" + std::to_string(p.D) +
                           " is smaller than intra-cluster delay d=" + std::to_string(p.d));
    return warnings;
}

struct Instance {
    Dag dag;
    DelayParams params;

    friend bool operator==(const Instance&, const Instance&) = default;
};

inline Instance make_instance(Dag dag, DelayParams params) {
    check_params(params);
    return {std::move(dag), params};
}

/// A partition of the node set. Cluster ids are renumbered in order of first
/// appearance over increasing node id, so two equal partitions compare equal.
class Clustering {
public:
    Clustering() = default;

    explicit Clustering(const std::vector<ClusterId>& assignment) : assign_(assignment.size()) {
        std::vector<ClusterId> remap;
        std::vector<bool> mapped;
        for (std::size_t v = 0; v < assignment.size(); ++v) {
            ClusterId c = assignment[v];
            if (c >= remap.size()) {
                remap.resize(c + 1);
                mapped.resize(c + 1, false);
            }
            if (!mapped[c]) {
                mapped[c] = true;
                remap[c] = static_cast<ClusterId>(count_++);
            }
            assign_[v] = remap[c];
        }
    }

    static Clustering singletons(std::size_t n) {
        std::vector<ClusterId> a(n);
        for (std::size_t v = 0; v < n; ++v) a[v] = static_cast<ClusterId>(v);
        return Clustering(a);
    }

    /// Throws NodeSetMismatch unless `blocks` partition exactly `[0, n)`.
    static Clustering from_blocks(std::size_t n, const std::vector<std::vector<NodeId>>& blocks) {
        constexpr ClusterId unset = std::numeric_limits<ClusterId>::max();
        std::vector<ClusterId> a(n, unset);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            for (NodeId v : blocks[b]) {
                if (v >= n) throw Error(Errc::NodeSetMismatch, "node " + std::to_string(v) + " is not in the instance");
                if (a[v] != unset) throw Error(Errc::NodeSetMismatch, "node " + std::to_string(v) + " appears in two clusters");
                a[v] = static_cast<ClusterId>(b);
            }
        }
        for (std::size_t v = 0; v < n; ++v)
            if (a[v] == unset) throw Error(Errc::NodeSetMismatch, "node " + std::to_string(v) + " is not clustered");
        return Clustering(a);
    }

    std::size_t node_count() const noexcept { return assign_.size(); }
    std::size_t cluster_count() const noexcept { return count_; }
    ClusterId cluster_of(NodeId v) const { return assign_.at(v); }
    bool same_cluster(NodeId a, NodeId b) const { return assign_.at(a) == assign_.at(b); }
    const std::vector<ClusterId>& assignment() const noexcept { return assign_; }

    /// Blocks in cluster-id order; members ascending.
    std::vector<std::vector<NodeId>> blocks() const {
        std::vector<std::vector<NodeId>> out(count_);
        for (NodeId v = 0; v < assign_.size(); ++v) out[assign_[v]].push_back(v);
        return out;
    }

    friend bool operator==(const Clustering&, const Clustering&) = default;

private:
    std::vector<ClusterId> assign_;
    std::size_t count_ = 0;
};

struct ClusterLoad {
    ClusterId cluster = 0;
    std::int64_t weight = 0;

    friend bool operator==(const ClusterLoad&, const ClusterLoad&) = default;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<ClusterLoad> over_capacity;
};

inline void require_same_nodes(const Instance& inst, const Clustering& c) {
    if (c.node_count() != inst.dag.node_count())
        throw Error(Errc::NodeSetMismatch, "clustering covers " + std::to_string(c.node_count()) +
                                               " nodes, instance has " + std::to_string(inst.dag.node_count()));
}

inline std::vector<std::int64_t> cluster_weights(const Instance& inst, const Clustering& c) {
    std::vector<std::int64_t> w(c.cluster_count(), 0);
    for (NodeId v = 0; v < c.node_count(); ++v) w[c.cluster_of(v)] += inst.dag.weight(v);
    return w;
}

inline FeasibilityReport validate(const Instance& inst, const Clustering& c) {
    require_same_nodes(inst, c);
    FeasibilityReport r;
    auto w = cluster_weights(inst, c);
    for (ClusterId k = 0; k < w.size(); ++k) {
        if (w[k] > inst.params.capacity) {
            r.feasible = false;
            r.over_capacity.push_back({k, w[k]});
        }
    }
    return r;
}

inline Delay arc_delay(const Clustering& c, const Arc& a, const DelayParams& p) {
    return c.same_cluster(a.tail, a.head) ? p.d : p.D;
}

inline Delay node_delay(const Instance& inst, NodeId v) {
    return inst.params.include_node_delays ? inst.dag.delay(v) : 0;
}

/// Delay of one path: node delays (when enabled) plus arc delays.
inline Delay path_delay(const Instance& inst, const Clustering& c, const Path& p) {
    Delay total = 0;
    for (NodeId v : p.nodes) total += node_delay(inst, v);
    for (const Arc& a : p.arcs()) total += arc_delay(c, a, inst.params);
    return total;
}

struct DelayReport {
    Delay delay = 0;
    Path critical_path;
};

/// Maximum path delay over all source-to-sink paths, by one pass in
/// topological order. Capacity is not checked. Ties on the critical path
/// prefer the lowest sink id, then the lowest predecessor id at each step.
inline DelayReport network_delay(const Instance& inst, const Clustering& c) {
    require_same_nodes(inst, c);
    const Dag& g = inst.dag;
    const std::size_t n = g.node_count();
    if (n == 0) return {};
    constexpr NodeId none = std::numeric_limits<NodeId>::max();
    std::vector<Delay> arrival(n, 0);
    std::vector<NodeId> from(n, none);
    for (NodeId v : g.topological_order()) {
        Delay best = 0;
        for (ArcIndex a : g.in_arcs(v)) {
            const Arc& arc = g.arc(a);
            Delay cand = arrival[arc.tail] + arc_delay(c, arc, inst.params);
            if (from[v] == none || cand > best) {
                best = cand;
                from[v] = arc.tail;
            }
        }
        arrival[v] = best + node_delay(inst, v);
    }
    NodeId end = none;
    for (NodeId v = 0; v < n; ++v)
        if (g.fanout(v) == 0 && (end == none || arrival[v] > arrival[end])) end = v;
    DelayReport r;
    r.delay = arrival[end];
    for (NodeId v = end; v != none; v = from[v]) r.critical_path.nodes.push_back(v);
    std::reverse(r.critical_path.nodes.begin(), r.critical_path.nodes.end());
    return r;
}

/// A set of vertex-disjoint edges, kept sorted.
class Matching {
public:
    Matching() = default;
    explicit Matching(std::vector<Edge> edges) : edges_(std::move(edges)) {
        std::sort(edges_.begin(), edges_.end());
    }

    std::span<const Edge> edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return edges_.empty(); }
    bool contains(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

    friend bool operator==(const Matching&, const Matching&) = default;

private:
    std::vector<Edge> edges_;
};

inline bool is_matching(const SimpleGraph& g, const Matching& m) {
    std::vector<bool> used(g.node_count(), false);
    for (const Edge& e : m.edges()) {
        if (!g.has_edge(e.u, e.v) || used[e.u] || used[e.v]) return false;
        used[e.u] = used[e.v] = true;
    }
    return true;
}

/// A matching no edge of `g` can extend.
inline bool is_maximal_matching(const SimpleGraph& g, const Matching& m) {
    if (!is_matching(g, m)) return false;
    std::vector<bool> used(g.node_count(), false);
    for (const Edge& e : m.edges()) used[e.u] = used[e.v] = true;
    for (const Edge& e : g.edges())
        if (!used[e.u] && !used[e.v]) return false;
    return true;
}

/// Matched pairs become two-node clusters, every other node a singleton.
inline Clustering matching_to_clustering(const Instance& inst, const Matching& m) {
    if (inst.params.capacity < 2)
        throw Error(Errc::PreconditionViolated, "a matching clustering needs capacity >= 2");
    if (!is_matching(underlying_simple_graph(inst.dag), m))
        throw Error(Errc::NotAMatching, "edges share an endpoint or are not edges of the graph");
    const std::size_t n = inst.dag.node_count();
    std::vector<ClusterId> a(n);
    for (NodeId v = 0; v < n; ++v) a[v] = v;
    for (const Edge& e : m.edges()) a[e.v] = e.u;
    return Clustering(a);
}

inline Clustering matching_to_clustering(std::size_t n, const Matching& m) {
    std::vector<ClusterId> a(n);
    for (NodeId v = 0; v < n; ++v) a[v] = v;
    for (const Edge& e : m.edges()) a[e.v] = e.u;
    return Clustering(a);
}

inline Matching clustering_to_matching(const Instance& inst, const Clustering& c) {
    require_same_nodes(inst, c);
    std::vector<Edge> edges;
    for (const auto& block : c.blocks()) {
        if (block.size() > 2)
            throw Error(Errc::ClusterTooLarge, "cluster of " + std::to_string(block.size()) + " nodes");
        if (block.size() == 2) {
            if (!inst.dag.find_arc(block[0], block[1]) && !inst.dag.find_arc(block[1], block[0]))
                throw Error(Errc::NonAdjacentPair, "nodes " + std::to_string(block[0]) + " and " +
                                                       std::to_string(block[1]) + " share no arc");
            edges.emplace_back(block[0], block[1]);
        }
    }
    return Matching(std::move(edges));
}

} // namespace dagclust

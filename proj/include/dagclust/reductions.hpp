#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dagclust/caps.hpp"
#include "dagclust/clustering.hpp"
#include "dagclust/dag.hpp"
#include "dagclust/error.hpp"
#include "dagclust/solvers.hpp"

namespace dagclust {

// ---------------------------------------------------------------------------
// Weighted hardness: PARTITION

struct PartitionMeta {
    std::vector<NodeId> element_nodes;
    NodeId source = 0;
    NodeId sink = 0;
    std::int64_t total = 0;
};

struct PartitionInstance {
    Instance instance;
    PartitionMeta meta;
};

/// s -> a_i -> t for every element; w(a_i) = S[i], w(s) = w(t) = B/2 where
/// B = sum(S); capacity B; d = 0, D = `inter_delay`; no node delays.
/// A clustering of delay D exists iff S splits into two equal halves.
inline PartitionInstance gen_partition_instance(std::span<const std::int64_t> elements, Delay inter_delay = 1) {
    if (elements.empty()) throw Error(Errc::EmptySet, "the multiset is empty");
    std::int64_t total = 0;
    for (std::int64_t x : elements) {
        if (x <= 0) throw Error(Errc::PreconditionViolated, "elements must be positive");
        total += x;
    }
    if (total % 2 != 0) throw Error(Errc::OddTotal, "element sum " + std::to_string(total) + " is odd");
    if (inter_delay <= 0) throw Error(Errc::PreconditionViolated, "the inter-cluster delay must be positive");

    const auto n = static_cast<NodeId>(elements.size());
    std::vector<NodeAttrs> nodes;
    nodes.push_back({total / 2, 0, "s"});
    for (NodeId i = 0; i < n; ++i) nodes.push_back({elements[i], 0, "a_" + std::to_string(i + 1)});
    nodes.push_back({total / 2, 0, "t"});
    const NodeId t = n + 1;
    std::vector<Arc> arcs;
    for (NodeId i = 1; i <= n; ++i) arcs.push_back({0, i});
    for (NodeId i = 1; i <= n; ++i) arcs.push_back({i, t});

    PartitionInstance out{{build_dag(std::move(nodes), std::move(arcs)), {0, inter_delay, total, false}}, {}};
    out.meta.source = 0;
    out.meta.sink = t;
    out.meta.total = total;
    for (NodeId i = 1; i <= n; ++i) out.meta.element_nodes.push_back(i);
    return out;
}

/// Element indices (0-based) clustered with s when the clustering is
/// feasible with delay at most D; nullopt otherwise.
inline std::optional<std::vector<std::size_t>> decode_partition(const Instance& inst, const PartitionMeta& meta,
                                                                const Clustering& c) {
    if (!validate(inst, c).feasible) return std::nullopt;
    if (network_delay(inst, c).delay > inst.params.D) return std::nullopt;
    std::vector<std::size_t> subset;
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < meta.element_nodes.size(); ++i) {
        NodeId v = meta.element_nodes[i];
        if (c.same_cluster(v, meta.source)) {
            subset.push_back(i);
            sum += inst.dag.weight(v);
        }
    }
    if (2 * sum != meta.total) return std::nullopt;
    return subset;
}

// ---------------------------------------------------------------------------
// Bridge DAG

namespace detail {

// Arcs of the 10-node bridge with local ids a=0 b=1 c=2 e=3 k=4 f=5 g=6 h=7 i=8 j=9.
inline constexpr std::array<std::array<NodeId, 2>, 12> kBridgeArcs{{
    {0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 7}, {4, 7}, {5, 8}, {6, 8}, {7, 9}, {8, 9},
}};

} // namespace detail

inline Instance gen_bridge(DelayParams params = {1, 2, 2, true}) {
    static constexpr std::array<const char*, 10> names{"a", "b", "c", "e", "k", "f", "g", "h", "i", "j"};
    std::vector<NodeAttrs> nodes;
    for (const char* l : names) nodes.push_back({1, 0, l});
    std::vector<Arc> arcs;
    for (auto [t, h] : detail::kBridgeArcs) arcs.push_back({t, h});
    return make_instance(build_dag(std::move(nodes), std::move(arcs)), params);
}

struct LemmaReport {
    bool pass = true;
    std::size_t matchings_checked = 0;
    Delay expected_max = 0;
    Delay min_seen = 0;
    Delay max_seen = 0;
    std::optional<Matching> counterexample;
    std::string failure;
};

/// For every maximal matching of the bridge: no source-sink path costs 4D,
/// some path costs d + 3D, and the network delay is exactly d + 3D.
inline LemmaReport verify_bridge_lemma(Delay d, Delay D, const Caps& caps = {}) {
    if (!(0 < d && d < D)) throw Error(Errc::PreconditionViolated, "the bridge lemma needs 0 < d < D");
    const Instance inst = gen_bridge({d, D, 2, false});
    const auto paths = enumerate_st_paths(inst.dag, caps.paths);
    LemmaReport r;
    r.expected_max = d + 3 * D;
    r.min_seen = std::numeric_limits<Delay>::max();
    for_each_maximal_matching(
        underlying_simple_graph(inst.dag),
        [&](const Matching& m) {
            ++r.matchings_checked;
            const Clustering c = matching_to_clustering(inst, m);
            bool has_4D = false, has_target = false;
            for (const Path& p : paths) {
                Delay pd = path_delay(inst, c, p);
                has_4D |= pd == 4 * D;
                has_target |= pd == r.expected_max;
            }
            const Delay net = network_delay(inst, c).delay;
            r.min_seen = std::min(r.min_seen, net);
            r.max_seen = std::max(r.max_seen, net);
            if (r.pass && (has_4D || !has_target || net != r.expected_max)) {
                r.pass = false;
                r.counterexample = m;
                r.failure = has_4D ? "a path has delay 4D"
                            : !has_target ? "no path has delay d+3D"
                                          : "network delay differs from d+3D";
            }
        },
        caps.matchings);
    return r;
}

// ---------------------------------------------------------------------------
// Unweighted hardness: 3-SAT gadgets

/// One literal occurrence: the 4-cycle corners `n1..n4` (n1->n2, n3->n2,
/// n4->n3, n4->next1) and the pendant 2-path n6 -> n5 -> (n1 or n3).
/// Horizontal edges are n1-n2 and n4-n3; vertical edges n3-n2 and n4-next1.
struct LiteralCycle {
    int literal = 0;
    std::size_t clause = 0;
    std::size_t position = 0;
    std::array<NodeId, 4> corner{};
    NodeId pendant_mid = 0;
    NodeId pendant_end = 0;
    NodeId next1 = 0; ///< n1 of the next occurrence of the variable, or own n1

    bool negated() const noexcept { return literal < 0; }
    int variable() const noexcept { return std::abs(literal); }
};

struct CnfFormula {
    std::size_t num_vars = 0;
    std::vector<std::vector<int>> clauses;

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

struct CnfMeta {
    std::size_t num_vars = 0;
    std::vector<std::pair<NodeId, NodeId>> clause_ranges; ///< [first, last + 1)
    std::vector<LiteralCycle> literals;                   ///< clause order, then position
    std::vector<Arc> join_arcs;
    Delay threshold_d_count = 8;
    Delay threshold_D_count = 13;

    /// 8d + 13D: every clause gadget's longest chain has 21 arcs and
    /// tolerates at most two false literals.
    Delay threshold(const DelayParams& p) const { return threshold_d_count * p.d + threshold_D_count * p.D; }
};

struct GeneratedCnf {
    Instance instance;
    CnfMeta meta;
};

using Assignment = std::vector<bool>; ///< index v-1 holds variable v

inline constexpr std::size_t kClauseGadgetNodes = 38;

namespace detail {

class CnfBuilder {
public:
    void add_clause(std::size_t clause, std::span<const int> lits) {
        const auto first = static_cast<NodeId>(nodes_.size());
        const std::string pre = "c" + std::to_string(clause) + ":";
        std::array<NodeId, 3> two{};         // corner n2 of each literal
        std::array<NodeId, 3> pendant_end{}; // n6 of each literal
        std::array<NodeId, 2> first_link{}; // k1 / j1
        std::array<std::array<NodeId, 9>, 2> bridge{};
        for (std::size_t pos = 0; pos < 3; ++pos) {
            const char tag = static_cast<char>('a' + pos);
            LiteralCycle lc;
            lc.literal = lits[pos];
            lc.clause = clause;
            lc.position = pos;
            lc.pendant_end = add(pre + "6" + tag);
            lc.pendant_mid = add(pre + "5" + tag);
            for (int k = 0; k < 4; ++k) lc.corner[k] = add(pre + std::to_string(k + 1) + tag);
            lc.next1 = lc.corner[0];
            two[pos] = lc.corner[1];
            pendant_end[pos] = lc.pendant_end;
            literals_.push_back(lc);
            if (pos < 2) {
                const std::string b = pos == 0 ? "k" : "j";
                first_link[pos] = add(pre + b + "1");
                static constexpr std::array<const char*, 9> suffix{"2", "2a", "2b", "3a", "3b", "3c", "3d", "4a", "4b"};
                for (std::size_t i = 0; i < 9; ++i) bridge[pos][i] = add(pre + b + suffix[i]);
            }
        }
        // Literal gadgets, pendant path into n1 (positive) or n3 (negated).
        for (std::size_t pos = 0; pos < 3; ++pos) {
            const LiteralCycle& lc = literals_[literals_.size() - 3 + pos];
            const auto& n = lc.corner;
            arcs_.push_back({n[0], n[1]});
            arcs_.push_back({n[2], n[1]});
            arcs_.push_back({n[3], n[2]});
            cycle_closing_.push_back(arcs_.size());
            arcs_.push_back({n[3], n[0]});
            arcs_.push_back({lc.pendant_mid, lc.negated() ? n[2] : n[0]});
            arcs_.push_back({lc.pendant_end, lc.pendant_mid});
        }
        // n2 of literal p -> link -> bridge whose sink is n6 of literal p+1.
        for (std::size_t pos = 0; pos < 2; ++pos) {
            const auto& br = bridge[pos];
            arcs_.push_back({two[pos], first_link[pos]});
            arcs_.push_back({first_link[pos], br[0]});
            // Bridge locals a..i are the block's slots in order; j is n6 of the next literal.
            auto map = [&](NodeId local) { return local == 9 ? pendant_end[pos + 1] : br[local]; };
            for (auto [t, h] : kBridgeArcs) arcs_.push_back({map(t), map(h)});
        }
        ranges_.push_back({first, static_cast<NodeId>(nodes_.size())});
    }

    /// Re-routes each variable's closing arcs n4 -> n1 to the n1 of the
    /// variable's next occurrence, cyclically.
    std::vector<Arc> join_variables(std::size_t num_vars) {
        std::vector<Arc> joins;
        for (int var = 1; var <= static_cast<int>(num_vars); ++var) {
            std::vector<std::size_t> occ;
            for (std::size_t i = 0; i < literals_.size(); ++i)
                if (literals_[i].variable() == var) occ.push_back(i);
            if (occ.size() < 2) continue;
            for (std::size_t k = 0; k < occ.size(); ++k) {
                LiteralCycle& cur = literals_[occ[k]];
                const LiteralCycle& nxt = literals_[occ[(k + 1) % occ.size()]];
                cur.next1 = nxt.corner[0];
                Arc joined{cur.corner[3], nxt.corner[0]};
                arcs_[cycle_closing_[occ[k]]] = joined;
                joins.push_back(joined);
            }
        }
        return joins;
    }

    GeneratedCnf finish(std::size_t num_vars, std::vector<Arc> joins, DelayParams params) {
        GeneratedCnf out;
        try {
            out.instance = make_instance(build_dag(std::move(nodes_), std::move(arcs_)), params);
        } catch (const Error& e) {
            if (e.code() == Errc::CycleDetected) throw Error(Errc::ConstructionCycle, e.what());
            throw;
        }
        out.meta.num_vars = num_vars;
        out.meta.clause_ranges = std::move(ranges_);
        out.meta.literals = std::move(literals_);
        out.meta.join_arcs = std::move(joins);
        if (out.instance.dag.node_count() != kClauseGadgetNodes * out.meta.clause_ranges.size())
            throw Error(Errc::ConstructionCycle, "clause gadgets do not have 38 nodes each");
        return out;
    }

private:
    NodeId add(std::string label) {
        nodes_.push_back({1, 0, std::move(label)});
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    std::vector<NodeAttrs> nodes_;
    std::vector<Arc> arcs_;
    std::vector<std::size_t> cycle_closing_; ///< per literal, index of its n4 -> n1 arc
    std::vector<LiteralCycle> literals_;
    std::vector<std::pair<NodeId, NodeId>> ranges_;
};

inline void require_three_cnf(const CnfFormula& f) {
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        if (f.clauses[i].size() != 3)
            throw Error(Errc::NotThreeCnf, "clause " + std::to_string(i + 1) + " has " +
                                               std::to_string(f.clauses[i].size()) + " literals");
        for (int lit : f.clauses[i])
            if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > f.num_vars)
                throw Error(Errc::NotThreeCnf, "literal " + std::to_string(lit) + " is out of range");
    }
}

} // namespace detail

struct VarGadget {
    Instance instance;
    LiteralCycle cycle;
};

/// Six-node literal gadget: 4-cycle 1->2, 3->2, 4->3, 4->1 plus the pendant
/// path 6->5->1 (positive) or 6->5->3 (negated). Node k has id k-1.
inline VarGadget gen_var_gadget(bool positive, DelayParams params = {1, 2, 2, true}) {
    std::vector<NodeAttrs> nodes;
    for (int k = 1; k <= 6; ++k) nodes.push_back({1, 0, std::to_string(k)});
    std::vector<Arc> arcs{{0, 1}, {2, 1}, {3, 2}, {3, 0}, {4, positive ? NodeId{0} : NodeId{2}}, {5, 4}};
    VarGadget g{make_instance(build_dag(std::move(nodes), std::move(arcs)), params), {}};
    g.cycle.literal = positive ? 1 : -1;
    g.cycle.corner = {0, 1, 2, 3};
    g.cycle.pendant_mid = 4;
    g.cycle.pendant_end = 5;
    g.cycle.next1 = 0;
    return g;
}

/// Matching picking the horizontal (n1-n2, n4-n3) or vertical (n3-n2, n4-next1)
/// edges of a literal cycle.
inline std::array<Edge, 2> cycle_edges(const LiteralCycle& lc, bool horizontal) {
    const auto& n = lc.corner;
    if (horizontal) return {Edge(n[0], n[1]), Edge(n[3], n[2])};
    return {Edge(n[2], n[1]), Edge(n[3], lc.next1)};
}

/// The 38-node gadget for one clause: literal gadgets A, B, C in sequence,
/// n2 of A -> k1 -> bridge ending at n6 of B, n2 of B -> j1 -> bridge ending
/// at n6 of C. No variable joins, even if a variable repeats.
inline GeneratedCnf gen_clause_gadget(std::span<const int> lits, DelayParams params = {1, 2, 2, true}) {
    if (lits.size() != 3) throw Error(Errc::NotThreeCnf, "a clause gadget takes exactly 3 literals");
    int max_var = 0;
    for (int l : lits) {
        if (l == 0) throw Error(Errc::NotThreeCnf, "literal 0");
        max_var = std::max(max_var, std::abs(l));
    }
    detail::CnfBuilder b;
    b.add_clause(0, lits);
    return b.finish(static_cast<std::size_t>(max_var), {}, params);
}

/// One clause gadget per clause, then every variable's occurrence cycles
/// joined into a single cycle.
inline GeneratedCnf gen_cnf_instance(const CnfFormula& f, DelayParams params = {1, 2, 2, true}) {
    detail::require_three_cnf(f);
    detail::CnfBuilder b;
    for (std::size_t i = 0; i < f.clauses.size(); ++i) b.add_clause(i, f.clauses[i]);
    auto joins = b.join_variables(f.num_vars);
    return b.finish(f.num_vars, std::move(joins), params);
}

/// Reads each literal cycle as horizontal (variable true) or vertical
/// (false). Fails when a cycle is neither or both, or occurrences disagree.
/// Variables with no occurrence default to false.
inline std::optional<Assignment> decode_assignment(const CnfMeta& meta, const Clustering& c) {
    std::vector<std::optional<bool>> value(meta.num_vars);
    for (const LiteralCycle& lc : meta.literals) {
        auto on = [&](const Edge& e) { return c.same_cluster(e.u, e.v); };
        const auto h = cycle_edges(lc, true);
        const auto v = cycle_edges(lc, false);
        const bool horizontal = on(h[0]) && on(h[1]);
        const bool vertical = on(v[0]) && on(v[1]);
        if (horizontal == vertical) return std::nullopt;
        auto& slot = value[lc.variable() - 1];
        if (slot && *slot != horizontal) return std::nullopt;
        slot = horizontal;
    }
    Assignment a(meta.num_vars, false);
    for (std::size_t i = 0; i < value.size(); ++i) a[i] = value[i].value_or(false);
    return a;
}

inline bool satisfies(const CnfFormula& f, const Assignment& a) {
    for (const auto& clause : f.clauses) {
        bool sat = false;
        for (int lit : clause) sat |= a[std::abs(lit) - 1] != (lit < 0);
        if (!sat) return false;
    }
    return true;
}

namespace detail {

/// For every node, the largest delay of a source-sink path through it.
inline std::vector<Delay> through_delays(const Instance& inst, const std::vector<ClusterId>& cluster) {
    const Dag& g = inst.dag;
    const std::size_t n = g.node_count();
    auto nd = [&](NodeId v) { return inst.params.include_node_delays ? g.delay(v) : Delay{0}; };
    auto ad = [&](ArcIndex a) {
        const Arc& arc = g.arc(a);
        return cluster[arc.tail] == cluster[arc.head] ? inst.params.d : inst.params.D;
    };
    const auto order = g.topological_order();
    std::vector<Delay> fwd(n, 0), bwd(n, 0), through(n, 0);
    for (NodeId v : order) {
        Delay best = 0;
        for (ArcIndex a : g.in_arcs(v)) best = std::max(best, fwd[g.arc(a).tail] + ad(a));
        fwd[v] = nd(v) + best;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Delay best = 0;
        for (ArcIndex a : g.out_arcs(*it)) best = std::max(best, ad(a) + bwd[g.arc(a).head]);
        bwd[*it] = nd(*it) + best;
    }
    for (NodeId v = 0; v < n; ++v) through[v] = fwd[v] + bwd[v] - nd(v);
    return through;
}

inline std::size_t uf_find(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

} // namespace detail

/// Minimum delay over clusterings that take the given perfect matching on
/// every literal cycle (`horizontal[i]` for meta.literals[i]) and a maximal
/// matching on the remaining vertices. Maximal matchings suffice because
/// turning an external arc internal never increases delay when d <= D.
///
/// The search is exact but avoids the product over clauses: residual
/// components are grouped when one can reach the other, so every
/// source-sink path meets the free vertices of at most one group. The
/// network delay is then the maximum of independent per-group terms, and
/// each group is minimized on its own (the `matchings` cap applies per group).
inline Solution best_clustering_with_cycles(const Instance& inst, const CnfMeta& meta,
                                            const std::vector<bool>& horizontal, const Caps& caps = {}) {
    require_unit_model(inst, "best_clustering_with_cycles");
    const Dag& g = inst.dag;
    const std::size_t n = g.node_count();
    std::vector<Edge> fixed;
    std::vector<bool> covered(n, false);
    for (std::size_t i = 0; i < meta.literals.size(); ++i) {
        for (const Edge& e : cycle_edges(meta.literals[i], horizontal.at(i))) {
            if (covered[e.u] || covered[e.v])
                throw Error(Errc::NotAMatching, "cycle choices of a joined variable disagree");
            covered[e.u] = covered[e.v] = true;
            fixed.push_back(e);
        }
    }
    const SimpleGraph full = underlying_simple_graph(g);
    std::vector<Edge> rest;
    for (const Edge& e : full.edges())
        if (!covered[e.u] && !covered[e.v]) rest.push_back(e);

    // Connected components of the residual graph, then groups of components
    // linked by reachability in the DAG.
    std::vector<std::size_t> parent(n);
    for (std::size_t v = 0; v < n; ++v) parent[v] = v;
    for (const Edge& e : rest) parent[detail::uf_find(parent, e.u)] = detail::uf_find(parent, e.v);
    std::vector<bool> free_node(n, false);
    for (const Edge& e : rest) free_node[e.u] = free_node[e.v] = true;
    const auto order = g.topological_order();
    std::vector<std::vector<std::size_t>> reaches(n); // component roots reachable from v
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::vector<std::size_t>& r = reaches[*it];
        if (free_node[*it]) r.push_back(detail::uf_find(parent, *it));
        for (ArcIndex a : g.out_arcs(*it)) {
            const auto& more = reaches[g.arc(a).head];
            r.insert(r.end(), more.begin(), more.end());
        }
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    std::vector<std::size_t> group(n);
    for (std::size_t v = 0; v < n; ++v) group[v] = v;
    for (NodeId v = 0; v < n; ++v) {
        if (!free_node[v]) continue;
        for (std::size_t c : reaches[v]) group[detail::uf_find(group, detail::uf_find(parent, v))] = detail::uf_find(group, c);
    }
    std::map<std::size_t, std::vector<Edge>> group_edges;
    for (const Edge& e : rest) group_edges[detail::uf_find(group, detail::uf_find(parent, e.u))].push_back(e);

    std::vector<ClusterId> cluster(n);
    for (NodeId v = 0; v < n; ++v) cluster[v] = v;
    for (const Edge& e : fixed) cluster[e.v] = e.u;
    std::vector<Edge> chosen(fixed);
    for (auto& [root, edges] : group_edges) {
        std::vector<NodeId> members;
        for (const Edge& e : edges) members.insert(members.end(), {e.u, e.v});
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        Delay best = std::numeric_limits<Delay>::max();
        Matching best_m;
        for_each_maximal_matching(
            SimpleGraph(n, edges),
            [&](const Matching& m) {
                for (const Edge& e : m.edges()) cluster[e.v] = e.u;
                const auto through = detail::through_delays(inst, cluster);
                Delay worst = 0;
                for (NodeId v : members) worst = std::max(worst, through[v]);
                if (worst < best) {
                    best = worst;
                    best_m = m;
                }
                for (const Edge& e : m.edges()) cluster[e.v] = e.v;
            },
            caps.matchings);
        chosen.insert(chosen.end(), best_m.edges().begin(), best_m.edges().end());
    }
    Solution s{matching_to_clustering(inst, Matching(std::move(chosen))), {}};
    s.report = network_delay(inst, s.clustering);
    return s;
}

/// Cycle orientations induced by an assignment.
inline std::vector<bool> cycle_pattern(const CnfMeta& meta, const Assignment& a) {
    std::vector<bool> h;
    for (const LiteralCycle& lc : meta.literals) h.push_back(a.at(lc.variable() - 1));
    return h;
}

} // namespace dagclust

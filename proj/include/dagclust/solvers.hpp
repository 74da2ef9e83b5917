#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dagclust/caps.hpp"
#include "dagclust/clustering.hpp"
#include "dagclust/dag.hpp"
#include "dagclust/error.hpp"

namespace dagclust {

struct Solution {
    Clustering clustering;
    DelayReport report;
};

/// Which of the two middle arcs an even-length path gives up.
enum class TieBreakPolicy { Lexicographic, AdversarialCenterFirst };

/// Unit weights, capacity 2, zero node delays: the regime the matching-based
/// solvers are defined for.
inline void require_unit_model(const Instance& inst, std::string_view who) {
    if (inst.params.capacity != 2)
        throw Error(Errc::PreconditionViolated, std::string(who) + " requires capacity 2");
    for (NodeId v = 0; v < inst.dag.node_count(); ++v) {
        if (inst.dag.weight(v) != 1)
            throw Error(Errc::PreconditionViolated, std::string(who) + " requires unit node weights");
        if (inst.dag.delay(v) != 0)
            throw Error(Errc::PreconditionViolated, std::string(who) + " requires zero node delays");
    }
}

// ---------------------------------------------------------------------------
// Central arc and the longest-path lower bound

/// Index of the central arc among `k` arcs. Odd `k` has one middle arc; for
/// even `k` Lexicographic takes the earlier one, AdversarialCenterFirst the later.
inline std::size_t central_arc_position(std::size_t k, TieBreakPolicy policy) {
    if (k == 0) throw Error(Errc::EmptyPath, "a path with no arcs has no central arc");
    if (policy == TieBreakPolicy::AdversarialCenterFirst) return k / 2;
    return (k + 1) / 2 - 1;
}

inline Arc central_arc(const Path& p, TieBreakPolicy policy = TieBreakPolicy::Lexicographic) {
    std::size_t i = central_arc_position(p.arc_count(), policy);
    return {p.nodes[i], p.nodes[i + 1]};
}

/// ceil(l/2)*d + floor(l/2)*D for the longest path length l: along any path
/// of a capacity-2 clustering at most every other arc is internal.
inline Delay longest_path_lower_bound(const Instance& inst) {
    require_unit_model(inst, "longest_path_lower_bound");
    const auto l = static_cast<Delay>(longest_path_length(inst.dag));
    return (l + 1) / 2 * inst.params.d + l / 2 * inst.params.D;
}

// ---------------------------------------------------------------------------
// Two-approximation by repeated central arcs of longest paths

struct ApproxStep {
    Path chosen_path;
    ArcIndex central_arc = 0;
    std::vector<ArcIndex> masked_arcs; ///< central arc first, then its newly labeled neighbours
};

struct ApproxTrace {
    std::vector<ApproxStep> steps;
    std::vector<ArcIndex> d_arcs;
};

struct ApproxResult {
    Clustering clustering;
    ApproxTrace trace;
};

/// Labels the central arc of a longest unlabeled path as internal, labels
/// every still-unlabeled arc sharing an endpoint with it as external, and
/// repeats until no unlabeled arc remains. Internal arcs form a matching,
/// which becomes the clustering.
inline ApproxResult approx2(const Instance& inst, TieBreakPolicy policy = TieBreakPolicy::Lexicographic) {
    require_unit_model(inst, "approx2");
    const Dag& g = inst.dag;
    enum class Label : unsigned char { Free, Internal, External };
    std::vector<Label> label(g.arc_count(), Label::Free);
    auto is_free = [&](ArcIndex a) { return label[a] == Label::Free; };

    ApproxResult result;
    while (true) {
        Path p = longest_path(g, is_free);
        if (p.arc_count() == 0) break;
        Arc c = central_arc(p, policy);
        ArcIndex ci = *g.find_arc(c.tail, c.head);
        ApproxStep step{std::move(p), ci, {ci}};
        label[ci] = Label::Internal;
        for (NodeId end : {c.tail, c.head}) {
            for (auto list : {g.in_arcs(end), g.out_arcs(end)}) {
                for (ArcIndex a : list) {
                    if (label[a] == Label::Free) {
                        label[a] = Label::External;
                        step.masked_arcs.push_back(a);
                    }
                }
            }
        }
        result.trace.d_arcs.push_back(ci);
        result.trace.steps.push_back(std::move(step));
    }
    for (Label l : label)
        if (l == Label::Free) throw Error(Errc::PreconditionViolated, "approx2 left an arc unlabeled");

    std::vector<Edge> edges;
    for (ArcIndex a : result.trace.d_arcs) edges.emplace_back(g.arc(a).tail, g.arc(a).head);
    Matching m(std::move(edges));
    if (!is_matching(underlying_simple_graph(g), m))
        throw Error(Errc::NotAMatching, "approx2 internal arcs are not a matching");
    result.clustering = matching_to_clustering(g.node_count(), m);
    return result;
}

// ---------------------------------------------------------------------------
// Exhaustive optimum over set partitions

namespace detail {

// Network delay for a raw cluster assignment; avoids building a Clustering
// per candidate inside the enumeration loop.
class AssignmentScorer {
public:
    explicit AssignmentScorer(const Instance& inst) : inst_(inst), arrival_(inst.dag.node_count()) {}

    Delay operator()(const std::vector<ClusterId>& cluster) {
        const Dag& g = inst_.dag;
        Delay worst = 0;
        for (NodeId v : g.topological_order()) {
            Delay best = 0;
            for (ArcIndex a : g.in_arcs(v)) {
                const Arc& arc = g.arc(a);
                Delay link = cluster[arc.tail] == cluster[arc.head] ? inst_.params.d : inst_.params.D;
                best = std::max(best, arrival_[arc.tail] + link);
            }
            arrival_[v] = best + node_delay(inst_, v);
            if (g.fanout(v) == 0) worst = std::max(worst, arrival_[v]);
        }
        return worst;
    }

private:
    const Instance& inst_;
    std::vector<Delay> arrival_;
};

} // namespace detail

/// Minimum-delay feasible clustering by enumerating restricted growth
/// strings (node v joins an existing block or opens block max+1) and pruning
/// blocks that would exceed capacity. The first minimum in enumeration order wins.
inline Solution brute_force_opt(const Instance& inst, std::size_t node_cap = Caps{}.brute_nodes) {
    const Dag& g = inst.dag;
    const std::size_t n = g.node_count();
    if (n > node_cap)
        throw Error(Errc::TooLarge, std::to_string(n) + " nodes exceed the brute-force cap of " + std::to_string(node_cap));
    for (NodeId v = 0; v < n; ++v)
        if (g.weight(v) > inst.params.capacity)
            throw Error(Errc::NoFeasibleClustering, "node " + std::to_string(v) + " alone exceeds the capacity");

    detail::AssignmentScorer score(inst);
    std::vector<ClusterId> cluster(n, 0);
    std::vector<std::int64_t> load;
    std::vector<ClusterId> best;
    Delay best_delay = std::numeric_limits<Delay>::max();

    std::function<void(NodeId)> place = [&](NodeId v) {
        if (v == n) {
            Delay d = score(cluster);
            if (d < best_delay) {
                best_delay = d;
                best = cluster;
            }
            return;
        }
        const std::int64_t w = g.weight(v);
        for (ClusterId k = 0; k < load.size(); ++k) {
            if (load[k] + w > inst.params.capacity) continue;
            cluster[v] = k;
            load[k] += w;
            place(v + 1);
            load[k] -= w;
        }
        cluster[v] = static_cast<ClusterId>(load.size());
        load.push_back(w);
        place(v + 1);
        load.pop_back();
    };
    place(0);

    Solution s{Clustering(best), {}};
    s.report = network_delay(inst, s.clustering);
    return s;
}

// ---------------------------------------------------------------------------
// Maximal matchings

/// Calls `visit(const Matching&)` for every maximal matching of `g` exactly
/// once. Vertices are decided in increasing id: an unmatched vertex either
/// takes a higher unmatched neighbour, or stays unmatched for good, which is
/// allowed only if no lower neighbour already stayed unmatched and every
/// unmatched higher neighbour still has another partner available.
/// Throws MatchingExplosion once more than `cap` matchings have been produced.
template <class Visitor>
void for_each_maximal_matching(const SimpleGraph& g, Visitor&& visit, std::size_t cap = Caps{}.matchings) {
    const std::size_t n = g.node_count();
    enum class State : unsigned char { Open, Matched, Skipped };
    std::vector<State> state(n, State::Open);
    std::vector<Edge> chosen;
    std::size_t produced = 0;

    auto can_skip = [&](NodeId v) {
        for (NodeId u : g.neighbors(v)) {
            if (u < v) {
                if (state[u] == State::Skipped) return false;
            } else if (state[u] == State::Open) {
                bool partner = false;
                for (NodeId w : g.neighbors(u))
                    if (w > v && w != u && state[w] == State::Open) {
                        partner = true;
                        break;
                    }
                if (!partner) return false;
            }
        }
        return true;
    };

    std::function<void(NodeId)> decide = [&](NodeId v) {
        while (v < n && state[v] == State::Matched) ++v;
        if (v == n) {
            if (++produced > cap)
                throw Error(Errc::MatchingExplosion, "more than " + std::to_string(cap) + " maximal matchings");
            visit(Matching(chosen));
            return;
        }
        for (NodeId u : g.neighbors(v)) {
            if (u <= v || state[u] != State::Open) continue;
            state[v] = state[u] = State::Matched;
            chosen.emplace_back(v, u);
            decide(v + 1);
            chosen.pop_back();
            state[v] = state[u] = State::Open;
        }
        if (can_skip(v)) {
            state[v] = State::Skipped;
            decide(v + 1);
            state[v] = State::Open;
        }
    };
    decide(0);
}

inline std::vector<Matching> enumerate_maximal_matchings(const SimpleGraph& g, std::size_t cap = Caps{}.matchings) {
    std::vector<Matching> out;
    for_each_maximal_matching(g, [&](const Matching& m) { out.push_back(m); }, cap);
    return out;
}

/// Best clustering among those induced by maximal matchings of the
/// underlying simple graph. In the unit model some optimum always has this shape.
inline Solution brute_force_matching_opt(const Instance& inst, std::size_t cap = Caps{}.matchings) {
    require_unit_model(inst, "brute_force_matching_opt");
    const std::size_t n = inst.dag.node_count();
    detail::AssignmentScorer score(inst);
    std::optional<Matching> best;
    Delay best_delay = std::numeric_limits<Delay>::max();
    std::vector<ClusterId> cluster(n);
    for_each_maximal_matching(
        underlying_simple_graph(inst.dag),
        [&](const Matching& m) {
            for (NodeId v = 0; v < n; ++v) cluster[v] = v;
            for (const Edge& e : m.edges()) cluster[e.v] = e.u;
            Delay d = score(cluster);
            if (d < best_delay) {
                best_delay = d;
                best = m;
            }
        },
        cap);
    Solution s{matching_to_clustering(inst, best.value_or(Matching{})), {}};
    s.report = network_delay(inst, s.clustering);
    return s;
}


// ---------------------------------------------------------------------------
// Trees: exact threshold search, and the leaf-peeling recursion

namespace detail {

// Minimal (in, out) pairs: `in` is the worst delay of a path inside a subtree
// ending at its root, `out` the worst delay of one starting there.
struct InOut {
    Delay in = 0;
    Delay out = 0;
};

inline void pareto_insert(std::vector<InOut>& front, InOut p) {
    for (const InOut& q : front)
        if (q.in <= p.in && q.out <= p.out) return;
    std::erase_if(front, [&](const InOut& q) { return p.in <= q.in && p.out <= q.out; });
    front.push_back(p);
}

// Decides "is there a matching whose network delay is at most T" on a tree
// rooted at node 0. Every directed path has a unique node closest to the
// root, where its incoming and outgoing halves meet from different children,
// so it suffices to bound in + out at every node while folding children.
class TreeThresholdDp {
public:
    enum class Force : unsigned char { Free, In, Out };

    explicit TreeThresholdDp(const Instance& inst) : inst_(inst) {
        const auto graph = underlying_simple_graph(inst.dag);
        const std::size_t n = graph.node_count();
        parent_.assign(n, 0);
        children_.assign(n, {});
        force_.assign(n, Force::Free);
        std::vector<bool> seen(n, false);
        order_.push_back(0);
        seen[0] = true;
        for (std::size_t i = 0; i < order_.size(); ++i) {
            NodeId v = order_[i];
            for (NodeId u : graph.neighbors(v)) {
                if (seen[u]) continue;
                seen[u] = true;
                parent_[u] = v;
                children_[v].push_back(u);
                order_.push_back(u);
            }
        }
    }

    bool feasible(Delay limit) const {
        const std::size_t n = order_.size();
        // fronts[v][m]: v matched to its parent (m = 1) or not (m = 0).
        std::vector<std::array<std::vector<InOut>, 2>> fronts(n);
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            const NodeId v = *it;
            std::vector<InOut> free_v{{0, 0}}; // v not yet matched to a child
            std::vector<InOut> used_v;         // v matched to one child
            for (NodeId c : children_[v]) {
                const bool into_v = inst_.dag.find_arc(c, v).has_value();
                auto fold = [&](const std::vector<InOut>& acc, const std::vector<InOut>& child, Delay cost,
                                std::vector<InOut>& target) {
                    for (const InOut& a : acc) {
                        for (const InOut& b : child) {
                            InOut r = a;
                            if (into_v) r.in = std::max(r.in, b.in + cost);
                            else r.out = std::max(r.out, cost + b.out);
                            if (r.in + r.out <= limit) pareto_insert(target, r);
                        }
                    }
                };
                std::vector<InOut> next_free, next_used;
                if (force_[c] != Force::In) {
                    fold(free_v, fronts[c][0], inst_.params.D, next_free);
                    fold(used_v, fronts[c][0], inst_.params.D, next_used);
                }
                if (force_[c] != Force::Out) fold(free_v, fronts[c][1], inst_.params.d, next_used);
                free_v = std::move(next_free);
                used_v = std::move(next_used);
            }
            fronts[v][1] = free_v;
            for (const InOut& p : used_v) pareto_insert(free_v, p);
            fronts[v][0] = std::move(free_v);
        }
        return !fronts[0][0].empty();
    }

    /// Smallest achievable delay, then one optimal matching found by fixing
    /// each tree edge in turn (preferring to leave it unmatched).
    Matching solve() {
        const Delay limit = optimum();
        for (std::size_t i = 1; i < order_.size(); ++i) {
            NodeId c = order_[i];
            force_[c] = Force::Out;
            if (!feasible(limit)) force_[c] = Force::In;
        }
        std::vector<Edge> edges;
        for (std::size_t i = 1; i < order_.size(); ++i)
            if (force_[order_[i]] == Force::In) edges.emplace_back(order_[i], parent_[order_[i]]);
        return Matching(std::move(edges));
    }

private:
    Delay optimum() const {
        // Every path delay is a*d + b*D with a + b its arc count.
        const auto l = static_cast<Delay>(longest_path_length(inst_.dag));
        std::vector<Delay> candidates;
        for (Delay a = 0; a <= l; ++a)
            for (Delay b = 0; a + b <= l; ++b) candidates.push_back(a * inst_.params.d + b * inst_.params.D);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::size_t lo = 0, hi = candidates.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (feasible(candidates[mid])) hi = mid;
            else lo = mid + 1;
        }
        return candidates[lo];
    }

    const Instance& inst_;
    std::vector<NodeId> order_;
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<Force> force_;
};

// The leaf-peeling recursion: solve |V| <= 3 exhaustively; otherwise take x,
// a leaf of the tree with its leaves removed, peel pendant neighbours of x
// according to deg(x), solve the smaller tree and reattach.
class PeelingSolver {
public:
    explicit PeelingSolver(const Instance& inst)
        : inst_(inst), graph_(underlying_simple_graph(inst.dag)), label_(inst.dag.node_count(), -1) {}

    Clustering run() {
        std::vector<bool> alive(inst_.dag.node_count(), true);
        solve(alive);
        return Clustering(std::vector<ClusterId>(label_.begin(), label_.end()));
    }

private:
    bool is_source_leaf(NodeId leaf, NodeId x) const { return inst_.dag.find_arc(leaf, x).has_value(); }

    int fresh() { return next_++; }

    void solve(std::vector<bool>& alive) {
        const std::size_t n = alive.size();
        std::vector<NodeId> members;
        for (NodeId v = 0; v < n; ++v)
            if (alive[v]) members.push_back(v);
        if (members.size() <= 3) {
            solve_small(members);
            return;
        }

        std::vector<std::size_t> deg(n, 0);
        for (NodeId v : members)
            for (NodeId u : graph_.neighbors(v))
                if (alive[u]) ++deg[v];

        std::vector<NodeId> core;
        for (NodeId v : members)
            if (deg[v] > 1) core.push_back(v);
        NodeId x = core.front();
        if (core.size() > 1) {
            for (NodeId v : core) {
                std::size_t core_deg = 0;
                for (NodeId u : graph_.neighbors(v))
                    if (alive[u] && deg[u] > 1) ++core_deg;
                if (core_deg == 1) {
                    x = v;
                    break;
                }
            }
        }

        std::vector<NodeId> src_leaves, sink_leaves;
        std::optional<NodeId> inner;
        for (NodeId u : graph_.neighbors(x)) {
            if (!alive[u]) continue;
            if (deg[u] == 1) (is_source_leaf(u, x) ? src_leaves : sink_leaves).push_back(u);
            else inner = u;
        }

        const std::size_t degx = deg[x];
        if (degx >= 3 && (src_leaves.size() >= 2 || sink_leaves.size() >= 2)) {
            // Two leaves of the same kind; at most one can join x.
            const auto& group = src_leaves.size() >= 2 ? src_leaves : sink_leaves;
            NodeId y2 = group.back();
            alive[y2] = false;
            solve(alive);
            label_[y2] = fresh();
            return;
        }
        if (degx == 3) {
            // One source leaf, one sink leaf, and the arc between x and inner.
            NodeId y_src = src_leaves.front();
            NodeId y_sink = sink_leaves.front();
            alive[y_src] = alive[y_sink] = false;
            solve(alive);
            const bool e_leaves_x = inst_.dag.find_arc(x, *inner).has_value();
            const NodeId partner = e_leaves_x ? y_src : y_sink;
            const NodeId lone = e_leaves_x ? y_sink : y_src;
            const int c = fresh();
            label_[x] = c;
            label_[partner] = c;
            label_[lone] = fresh();
            return;
        }
        NodeId y = src_leaves.empty() ? sink_leaves.front() : src_leaves.front();
        const bool out_y = inst_.dag.find_arc(x, y).has_value();
        const bool out_inner = inst_.dag.find_arc(x, *inner).has_value();
        if (out_y == out_inner) {
            // x is a source or a sink.
            alive[y] = false;
            solve(alive);
            label_[y] = fresh();
        } else {
            alive[x] = alive[y] = false;
            solve(alive);
            const int c = fresh();
            label_[x] = c;
            label_[y] = c;
        }
    }

    void solve_small(const std::vector<NodeId>& members) {
        std::vector<NodeId> local(inst_.dag.node_count(), 0);
        for (NodeId i = 0; i < members.size(); ++i) local[members[i]] = i;
        std::vector<Arc> arcs;
        for (const Arc& a : inst_.dag.arcs()) {
            bool in_t = std::binary_search(members.begin(), members.end(), a.tail);
            bool in_h = std::binary_search(members.begin(), members.end(), a.head);
            if (in_t && in_h) arcs.push_back({local[a.tail], local[a.head]});
        }
        Instance sub{build_dag(members.size(), std::move(arcs)), inst_.params};
        auto best = brute_force_opt(sub, members.size());
        const int base = next_;
        next_ += static_cast<int>(best.clustering.cluster_count());
        for (NodeId i = 0; i < members.size(); ++i)
            label_[members[i]] = base + static_cast<int>(best.clustering.cluster_of(i));
    }

    const Instance& inst_;
    SimpleGraph graph_;
    std::vector<int> label_;
    int next_ = 0;
};

inline void require_tree(const Instance& inst, std::string_view who) {
    if (!underlying_simple_graph(inst.dag).is_tree())
        throw Error(Errc::NotATree, std::string(who) + ": the underlying simple graph is not a tree");
    require_unit_model(inst, who);
}

} // namespace detail

/// Optimal clustering when the underlying simple graph is a tree (unit
/// model), in polynomial time: binary search over the O(l^2) achievable
/// delay values with a tree feasibility check, then edge-by-edge fixing.
inline Solution tree_exact(const Instance& inst) {
    detail::require_tree(inst, "tree_exact");
    detail::TreeThresholdDp dp(inst);
    Solution s{matching_to_clustering(inst, dp.solve()), {}};
    s.report = network_delay(inst, s.clustering);
    return s;
}

/// The leaf-peeling recursion for trees, kept as published. It always
/// returns a capacity-feasible clustering but is NOT always optimal: an
/// optimum of the reduced tree can be the wrong one once peeled leaves are
/// reattached (e.g. the star 2->3, 3->0, 3->1). Use tree_exact for optima.
inline Solution tree_leaf_peeling(const Instance& inst) {
    detail::require_tree(inst, "tree_leaf_peeling");
    Solution s{detail::PeelingSolver(inst).run(), {}};
    s.report = network_delay(inst, s.clustering);
    return s;
}

} // namespace dagclust

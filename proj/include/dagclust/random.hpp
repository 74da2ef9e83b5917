#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "dagclust/clustering.hpp"
#include "dagclust/dag.hpp"

namespace dagclust {

/// Seeded generators for property tests and report verbs. The engine is
/// std::mt19937_64, whose output sequence is fixed by the C++ standard, and
/// bounded draws use plain rejection sampling instead of <random>
/// distributions (whose algorithms vary between standard libraries), so a
/// seed yields the same instance on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return below(2) == 1; }

    /// Fisher-Yates.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

/// Unit-weight, zero-delay DAG on `n` nodes with at most `max_arcs` arcs.
/// Arcs go forward in a hidden random order, so node ids carry no
/// topological information.
inline Dag random_dag(Rng& rng, std::size_t n, std::size_t max_arcs) {
    std::vector<Arc> pairs;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) pairs.push_back({i, j});
    const std::size_t m = static_cast<std::size_t>(rng.below(std::min(max_arcs, pairs.size()) + 1));
    rng.shuffle(pairs);
    pairs.resize(m);
    std::vector<NodeId> perm(n);
    for (NodeId v = 0; v < n; ++v) perm[v] = v;
    rng.shuffle(perm);
    for (Arc& a : pairs) a = {perm[a.tail], perm[a.head]};
    std::sort(pairs.begin(), pairs.end());
    return build_dag(n, std::move(pairs));
}

/// Random labelled tree on `n` nodes (each node after the first attaches to
/// a uniformly chosen earlier one), every edge oriented by a coin flip, ids
/// shuffled. Acyclic because the underlying graph has no cycle at all.
inline Dag random_tree_dag(Rng& rng, std::size_t n) {
    std::vector<NodeId> perm(n);
    for (NodeId v = 0; v < n; ++v) perm[v] = v;
    rng.shuffle(perm);
    std::vector<Arc> arcs;
    for (NodeId v = 1; v < n; ++v) {
        NodeId parent = static_cast<NodeId>(rng.below(v));
        NodeId a = perm[parent], b = perm[v];
        arcs.push_back(rng.coin() ? Arc{a, b} : Arc{b, a});
    }
    std::sort(arcs.begin(), arcs.end());
    return build_dag(n, std::move(arcs));
}

/// Directed chain 0 -> 1 -> ... -> arcs.
inline Dag chain_dag(std::size_t arcs) {
    std::vector<Arc> a;
    for (NodeId v = 0; v < arcs; ++v) a.push_back({v, v + 1});
    return build_dag(arcs + 1, std::move(a));
}

inline DelayParams unit_params(Delay d, Delay D) { return {d, D, 2, true}; }

} // namespace dagclust

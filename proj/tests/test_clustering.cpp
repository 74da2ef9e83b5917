#include <gtest/gtest.h>

#include "dagclust/dagclust.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dagclust;

namespace {

Clustering sigma(const Instance& fig2) {
    auto id = [&](const char* l) { return *fig2.dag.find_label(l); };
    return Clustering::from_blocks(6, {{id("s"), id("a")}, {id("b"), id("d")}, {id("c"), id("t")}});
}

} // namespace

TEST(Params, Validation) {
    EXPECT_TRUE(check_params({1, 2, 2, true}).empty());
    EXPECT_EQ(check_params({3, 2, 2, true}).size(), 1u);
    EXPECT_THROW(check_params({-1, 2, 2, true}), Error);
    EXPECT_THROW(check_params({1, 2, 0, true}), Error);
}

TEST(ClusteringTest, EqualPartitionsCompareEqual) {
    EXPECT_EQ(Clustering({4, 4, 9}), Clustering({0, 0, 1}));
    EXPECT_NE(Clustering({0, 1, 1}), Clustering({0, 0, 1}));
    EXPECT_EQ(Clustering::from_blocks(3, {{2}, {1, 0}}), Clustering({0, 0, 1}));
}

TEST(ClusteringTest, FromBlocksChecksNodeSet) {
    EXPECT_THROW(Clustering::from_blocks(3, {{0, 1}}), Error);
    EXPECT_THROW(Clustering::from_blocks(2, {{0, 1}, {1}}), Error);
    EXPECT_THROW(Clustering::from_blocks(2, {{0, 1, 2}}), Error);
}

TEST(ClusteringTest, ValidateReportsOverweightClusters) {
    Instance fig2 = fixtures::fig2();
    EXPECT_TRUE(validate(fig2, sigma(fig2)).feasible);
    FeasibilityReport r = validate(fig2, Clustering::from_blocks(6, {{0, 1, 2}, {3}, {4}, {5}}));
    EXPECT_FALSE(r.feasible);
    ASSERT_EQ(r.over_capacity.size(), 1u);
    EXPECT_EQ(r.over_capacity[0].weight, 3);
}

TEST(ClusteringTest, MismatchedNodeCountIsRejected) {
    Instance fig2 = fixtures::fig2();
    EXPECT_THROW(network_delay(fig2, Clustering::singletons(5)), Error);
}

TEST(Delay, SingleArc) {
    Instance inst = fixtures::unit(build_dag(2, {{0, 1}}));
    EXPECT_EQ(network_delay(inst, Clustering({0, 0})).delay, 1);
    EXPECT_EQ(network_delay(inst, Clustering({0, 1})).delay, 2);
}

TEST(Delay, SingleNodeWithDelay) {
    Instance inst = make_instance(build_dag({{1, 5, "x"}}, {}), {1, 2, 2, true});
    DelayReport r = network_delay(inst, Clustering::singletons(1));
    EXPECT_EQ(r.delay, 5);
    EXPECT_EQ(r.critical_path.nodes, std::vector<NodeId>{0});
    inst.params.include_node_delays = false;
    EXPECT_EQ(network_delay(inst, Clustering::singletons(1)).delay, 0);
}

// The figure's text puts this clustering at 8; counting both endpoint
// delays, s-a-d-t costs 4 + 1 + 2 + 2 = 9.
TEST(Delay, Fig2SigmaIsNine) {
    Instance fig2 = fixtures::fig2();
    DelayReport r = network_delay(fig2, sigma(fig2));
    EXPECT_EQ(r.delay, 9);
    EXPECT_EQ(oracle::delay_by_paths(fig2, oracle::assignment_of(sigma(fig2))), 9);
    EXPECT_EQ(path_delay(fig2, sigma(fig2), r.critical_path), 9);
}

TEST(Delay, Fig2SigmaIsOptimal) {
    Instance fig2 = fixtures::fig2();
    EXPECT_EQ(oracle::opt_by_assignments(fig2), 9);
}

TEST(Delay, CriticalPathTieBreakIsLowestSinkThenLowestPredecessor) {
    // Two equal paths 0->2 and 1->2; predecessor 0 wins.
    Instance inst = fixtures::unit(build_dag(3, {{0, 2}, {1, 2}}));
    EXPECT_EQ(network_delay(inst, Clustering::singletons(3)).critical_path.nodes, (std::vector<NodeId>{0, 2}));
    // Two sinks at equal delay; sink 1 wins over sink 2.
    Instance fork = fixtures::unit(build_dag(3, {{0, 1}, {0, 2}}));
    EXPECT_EQ(network_delay(fork, Clustering::singletons(3)).critical_path.nodes, (std::vector<NodeId>{0, 1}));
}

TEST(Delay, DpMatchesPathOracleOnRandomClusterings) {
    Rng rng(17);
    for (int i = 0; i < 400; ++i) {
        const std::size_t n = 1 + rng.below(10);
        std::vector<NodeAttrs> nodes;
        for (std::size_t v = 0; v < n; ++v) nodes.push_back({1, rng.between(0, 3), ""});
        Dag shape = random_dag(rng, n, 20);
        std::vector<Arc> arcs(shape.arcs().begin(), shape.arcs().end());
        Instance inst = make_instance(build_dag(nodes, arcs), {rng.between(0, 3), rng.between(3, 9), 3, rng.coin()});
        std::vector<ClusterId> a(n);
        for (auto& x : a) x = static_cast<ClusterId>(rng.below(n));
        Clustering c(a);
        DelayReport r = network_delay(inst, c);
        ASSERT_EQ(r.delay, oracle::delay_by_paths(inst, oracle::assignment_of(c)));
        ASSERT_TRUE(is_path_of(inst.dag, r.critical_path));
        EXPECT_EQ(path_delay(inst, c, r.critical_path), r.delay);
    }
}

TEST(MatchingTest, ValidityAndMaximality) {
    SimpleGraph chain = underlying_simple_graph(chain_dag(3));
    EXPECT_TRUE(is_matching(chain, Matching({{0, 1}, {2, 3}})));
    EXPECT_TRUE(is_maximal_matching(chain, Matching({{1, 2}})));
    EXPECT_FALSE(is_maximal_matching(chain, Matching({{0, 1}})));
    EXPECT_FALSE(is_matching(chain, Matching({{0, 1}, {1, 2}})));
    EXPECT_FALSE(is_matching(chain, Matching({{0, 2}})));
}

TEST(MatchingTest, RoundTripThroughClustering) {
    Instance inst = fixtures::unit(chain_dag(3));
    Matching m({{0, 1}, {2, 3}});
    Clustering c = matching_to_clustering(inst, m);
    EXPECT_EQ(c, Clustering({0, 0, 1, 1}));
    EXPECT_EQ(clustering_to_matching(inst, c), m);
    EXPECT_EQ(network_delay(inst, c).delay, 4);
}

TEST(MatchingTest, ConversionErrors) {
    Instance inst = fixtures::unit(chain_dag(3));
    EXPECT_THROW(matching_to_clustering(inst, Matching({{0, 1}, {1, 2}})), Error);
    EXPECT_THROW(clustering_to_matching(inst, Clustering({0, 0, 0, 1})), Error);
    EXPECT_THROW(clustering_to_matching(inst, Clustering({0, 1, 1, 0})), Error);
}

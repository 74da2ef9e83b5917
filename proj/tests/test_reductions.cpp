#include <gtest/gtest.h>

#include <numeric>

#include "dagclust/dagclust.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dagclust;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no dagclust::Error thrown";
    return Errc::ParseError;
}

Clustering perfect(const Instance& inst, const LiteralCycle& lc, bool horizontal) {
    auto e = cycle_edges(lc, horizontal);
    return matching_to_clustering(inst, Matching({e[0], e[1], Edge(lc.pendant_mid, lc.pendant_end)}));
}

std::vector<bool> bits(unsigned mask, std::size_t k) {
    std::vector<bool> b;
    for (std::size_t i = 0; i < k; ++i) b.push_back(mask >> i & 1);
    return b;
}

} // namespace

TEST(Partition, TwoOnesSplit) {
    const std::vector<std::int64_t> s{1, 1};
    PartitionInstance p = gen_partition_instance(s);
    EXPECT_EQ(p.instance.dag.node_count(), 4u);
    EXPECT_EQ(p.instance.dag.arc_count(), 4u);
    EXPECT_EQ(p.instance.params.capacity, 2);
    EXPECT_EQ(p.instance.dag.weight(p.meta.source), 1);
    EXPECT_EQ(p.instance.dag.label(p.meta.element_nodes[1]), "a_2");
    Solution opt = brute_force_opt(p.instance);
    EXPECT_EQ(opt.report.delay, 1);
    auto half = decode_partition(p.instance, p.meta, opt.clustering);
    ASSERT_TRUE(half);
    EXPECT_EQ(half->size(), 1u);
}

TEST(Partition, Errors) {
    const std::vector<std::int64_t> odd{1, 2}, none{}, bad{2, 0};
    EXPECT_EQ(code_of([&] { gen_partition_instance(odd); }), Errc::OddTotal);
    EXPECT_EQ(code_of([&] { gen_partition_instance(none); }), Errc::EmptySet);
    EXPECT_EQ(code_of([&] { gen_partition_instance(bad); }), Errc::PreconditionViolated);
}

TEST(Partition, UnbalancedSetCostsMore) {
    const std::vector<std::int64_t> s{1, 1, 4};
    ASSERT_FALSE(oracle::has_balanced_split(s));
    PartitionInstance p = gen_partition_instance(s, 3);
    Solution opt = brute_force_opt(p.instance);
    EXPECT_GT(opt.report.delay, 3);
    EXPECT_FALSE(decode_partition(p.instance, p.meta, opt.clustering));
}

TEST(Partition, DecodedHalfSumsToHalf) {
    const std::vector<std::int64_t> s{3, 1, 2, 2};
    PartitionInstance p = gen_partition_instance(s);
    auto half = decode_partition(p.instance, p.meta, brute_force_opt(p.instance).clustering);
    ASSERT_TRUE(half);
    std::int64_t sum = 0;
    for (std::size_t i : *half) sum += s[i];
    EXPECT_EQ(sum, 4);
}

TEST(Bridge, Shape) {
    Instance b = gen_bridge();
    EXPECT_EQ(b.dag.node_count(), 10u);
    EXPECT_EQ(b.dag.arc_count(), 12u);
    EXPECT_EQ(b.dag.display_name(0), "a");
}

TEST(Bridge, LemmaHolds) {
    for (auto [d, D] : {std::pair<Delay, Delay>{1, 2}, {1, 5}, {3, 7}, {2, 3}, {1, 100}}) {
        LemmaReport r = verify_bridge_lemma(d, D);
        EXPECT_TRUE(r.pass) << d << "," << D << ": " << r.failure;
        EXPECT_EQ(r.matchings_checked, 32u);
        EXPECT_EQ(r.min_seen, d + 3 * D);
        EXPECT_EQ(r.max_seen, d + 3 * D);
    }
}

TEST(Bridge, LemmaNeedsDLessThanBigD) {
    EXPECT_EQ(code_of([] { verify_bridge_lemma(2, 2); }), Errc::PreconditionViolated);
    EXPECT_EQ(code_of([] { verify_bridge_lemma(0, 2); }), Errc::PreconditionViolated);
}

TEST(VariableGadget, PerfectMatchingDelays) {
    for (auto [d, D] : {std::pair<Delay, Delay>{1, 2}, {1, 10}, {3, 7}}) {
        DelayParams p = unit_params(d, D);
        VarGadget pos = gen_var_gadget(true, p);
        VarGadget neg = gen_var_gadget(false, p);
        EXPECT_EQ(network_delay(pos.instance, perfect(pos.instance, pos.cycle, true)).delay, 2 * d + D);
        EXPECT_EQ(network_delay(pos.instance, perfect(pos.instance, pos.cycle, false)).delay, 2 * D + d);
        EXPECT_EQ(network_delay(neg.instance, perfect(neg.instance, neg.cycle, true)).delay, 2 * D + d);
        EXPECT_EQ(network_delay(neg.instance, perfect(neg.instance, neg.cycle, false)).delay, 2 * d + D);
    }
}

TEST(VariableGadget, ExactlyTwoPerfectMatchings) {
    VarGadget g = gen_var_gadget(true);
    std::size_t perfect_count = 0;
    for (const Matching& m : enumerate_maximal_matchings(underlying_simple_graph(g.instance.dag)))
        perfect_count += m.size() == 3;
    EXPECT_EQ(perfect_count, 2u);
}

TEST(ClauseGadget, ShapeInvariants) {
    const std::vector<int> lits{1, -2, 3};
    GeneratedCnf g = gen_clause_gadget(lits);
    EXPECT_EQ(g.instance.dag.node_count(), kClauseGadgetNodes);
    EXPECT_EQ(g.instance.dag.arc_count(), 46u);
    EXPECT_EQ(underlying_simple_graph(g.instance.dag).max_degree(), 3u);
    EXPECT_EQ(g.meta.literals.size(), 3u);
    EXPECT_EQ(g.meta.threshold(g.instance.params), 8 * 1 + 13 * 2);
}

TEST(ClauseGadget, ThresholdBiconditional) {
    const std::vector<int> lits{1, -2, 3};
    GeneratedCnf g = gen_clause_gadget(lits);
    const Delay threshold = g.meta.threshold(g.instance.params);
    for (unsigned mask = 0; mask < 8; ++mask) {
        Assignment a;
        for (bool b : bits(mask, 3)) a.push_back(b);
        const bool sat = satisfies({3, {lits}}, a);
        Solution s = best_clustering_with_cycles(g.instance, g.meta, cycle_pattern(g.meta, a));
        EXPECT_EQ(s.report.delay <= threshold, sat) << "mask " << mask << " delay " << s.report.delay;
        EXPECT_EQ(decode_assignment(g.meta, s.clustering), a);
    }
}

TEST(ClauseGadget, GroupedSearchMatchesFullEnumeration) {
    const std::vector<int> lits{-1, 2, -3};
    GeneratedCnf g = gen_clause_gadget(lits, unit_params(1, 5));
    const Instance& inst = g.instance;
    const SimpleGraph full = underlying_simple_graph(inst.dag);
    for (unsigned mask = 0; mask < 8; ++mask) {
        const std::vector<bool> h = bits(mask, 3);
        std::vector<Edge> fixed;
        std::vector<bool> covered(inst.dag.node_count(), false);
        for (std::size_t i = 0; i < 3; ++i)
            for (const Edge& e : cycle_edges(g.meta.literals[i], h[i])) {
                fixed.push_back(e);
                covered[e.u] = covered[e.v] = true;
            }
        std::vector<Edge> rest;
        for (const Edge& e : full.edges())
            if (!covered[e.u] && !covered[e.v]) rest.push_back(e);
        Delay best = std::numeric_limits<Delay>::max();
        for (const Matching& m : enumerate_maximal_matchings(SimpleGraph(inst.dag.node_count(), rest))) {
            std::vector<Edge> all(fixed);
            all.insert(all.end(), m.edges().begin(), m.edges().end());
            best = std::min(best, network_delay(inst, matching_to_clustering(inst, Matching(all))).delay);
        }
        EXPECT_EQ(best_clustering_with_cycles(inst, g.meta, h).report.delay, best) << "mask " << mask;
    }
}

TEST(ClauseGadget, RejectsWrongArity) {
    const std::vector<int> two{1, 2};
    EXPECT_EQ(code_of([&] { gen_clause_gadget(two); }), Errc::NotThreeCnf);
    EXPECT_EQ(code_of([] { gen_cnf_instance({3, {{1, 2}}}); }), Errc::NotThreeCnf);
}

TEST(CnfInstance, SharedVariablesJoinCyclically) {
    const CnfFormula f{4, {{1, -2, 3}, {-1, 2, 4}, {1, 2, 3}}};
    GeneratedCnf g = gen_cnf_instance(f);
    EXPECT_EQ(g.instance.dag.node_count(), 38u * 3);
    EXPECT_LE(underlying_simple_graph(g.instance.dag).max_degree(), 3u);
    // Variables 1 and 2 occur three times, variable 3 twice: 8 join arcs.
    EXPECT_EQ(g.meta.join_arcs.size(), 8u);
    for (const Arc& a : g.meta.join_arcs) EXPECT_TRUE(g.instance.dag.find_arc(a.tail, a.head));
}

TEST(CnfInstance, TwoClauseFormulaThreshold) {
    const CnfFormula f{4, {{1, -2, 3}, {-1, 2, 4}}};
    GeneratedCnf g = gen_cnf_instance(f);
    const Delay threshold = g.meta.threshold(g.instance.params);
    for (unsigned mask = 0; mask < 16; ++mask) {
        Assignment a;
        for (bool b : bits(mask, 4)) a.push_back(b);
        Solution s = best_clustering_with_cycles(g.instance, g.meta, cycle_pattern(g.meta, a));
        EXPECT_EQ(s.report.delay <= threshold, satisfies(f, a)) << "mask " << mask;
        EXPECT_EQ(decode_assignment(g.meta, s.clustering), a);
    }
}

TEST(CnfInstance, DecodeRejectsMixedCycles) {
    const std::vector<int> lits{1, 2, 3};
    GeneratedCnf g = gen_clause_gadget(lits);
    EXPECT_FALSE(decode_assignment(g.meta, Clustering::singletons(g.instance.dag.node_count())));
}

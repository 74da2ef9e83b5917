#include <gtest/gtest.h>

#include "dagclust/dagclust.hpp"
#include "fixtures.hpp"

using namespace dagclust;

namespace {

Error error_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no dagclust::Error thrown";
    return Error(Errc::ParseError, "none");
}

std::string trimmed(std::string s) {
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

Instance random_instance(Rng& rng) {
    const std::size_t n = rng.below(9);
    std::vector<NodeAttrs> nodes;
    for (std::size_t v = 0; v < n; ++v)
        nodes.push_back({rng.between(0, 5), rng.between(0, 5), rng.coin() ? "v" + std::to_string(v) + "\"q" : ""});
    std::vector<Arc> arcs;
    if (n > 0) {
        Dag shape = random_dag(rng, n, 12);
        arcs.assign(shape.arcs().begin(), shape.arcs().end());
    }
    return make_instance(build_dag(nodes, arcs), {rng.between(0, 4), rng.between(0, 9), rng.between(1, 6), rng.coin()});
}

} // namespace

TEST(InstanceFile, MinimalTwoNodes) {
    Instance inst = parse_instance(R"({"schema_version":1,"nodes":[{"id":0},{"id":1}],"arcs":[[0,1]],
                                       "params":{"d":1,"D":2,"capacity":2}})");
    EXPECT_EQ(inst.dag.node_count(), 2u);
    EXPECT_EQ(inst.dag.arc_count(), 1u);
    EXPECT_EQ(inst.dag.weight(0), 1);
    EXPECT_EQ(inst.dag.delay(1), 0);
    EXPECT_TRUE(inst.params.include_node_delays);
}

TEST(InstanceFile, UnknownArcEndpointNamesTheArc) {
    Error e = error_of([] {
        parse_instance(R"({"schema_version":1,"nodes":[{"id":0},{"id":1}],"arcs":[[0,1],[1,7]],
                           "params":{"d":1,"D":2,"capacity":2}})");
    });
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("arcs[1]"), std::string::npos) << e.what();
}

TEST(InstanceFile, Fig2GoldenFile) {
    const std::string text = fixtures::slurp(fixtures::data_path("fig2.json"));
    Instance inst = parse_instance(text);
    EXPECT_EQ(inst.dag.node_count(), 6u);
    EXPECT_EQ(inst.dag.arc_count(), 8u);
    EXPECT_EQ(emit_instance(inst), trimmed(text));
}

TEST(InstanceFile, ShippedFilesAreCanonical) {
    for (const char* name : {"fig1.json", "fig2.json", "chain3.json"}) {
        const std::string text = fixtures::slurp(fixtures::data_path(name));
        EXPECT_EQ(emit_instance(parse_instance(text)), trimmed(text)) << name;
    }
}

TEST(InstanceFile, RoundTripProperty) {
    Rng rng(4242);
    for (int i = 0; i < 300; ++i) {
        Instance inst = random_instance(rng);
        const std::string text = emit_instance(inst);
        Instance back = parse_instance(text);
        EXPECT_EQ(back.dag, inst.dag);
        EXPECT_EQ(back.params, inst.params);
        EXPECT_EQ(emit_instance(back), text);
    }
}

TEST(InstanceFile, MalformedJsonReportsPosition) {
    Error e = error_of([] { parse_instance("{\n  \"schema_version\": 1,\n  \"nodes\": [,]\n}"); });
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
}

TEST(InstanceFile, FieldErrorsNameTheField) {
    Error e = error_of([] {
        parse_instance(R"({"schema_version":1,"nodes":[{"id":0,"weight":"x"}],"arcs":[],"params":{"d":1,"D":2,"capacity":2}})");
    });
    EXPECT_NE(std::string(e.what()).find("nodes[0].weight"), std::string::npos) << e.what();
    e = error_of([] { parse_instance(R"({"schema_version":1,"nodes":[],"arcs":[],"params":{"d":1,"capacity":2}})"); });
    EXPECT_NE(std::string(e.what()).find("params.D"), std::string::npos) << e.what();
}

TEST(InstanceFile, UnsupportedSchemaVersion) {
    EXPECT_EQ(error_of([] { parse_instance(R"({"schema_version":2,"nodes":[],"arcs":[],"params":{}})"); }).code(),
              Errc::SchemaVersionUnsupported);
}

TEST(InstanceFile, SparseIdsAreRemappedWithWarning) {
    std::vector<std::string> warnings;
    Instance inst = parse_instance(R"({"schema_version":1,"nodes":[{"id":20,"label":"b"},{"id":10,"label":"a"}],
                                       "arcs":[[10,20]],"params":{"d":1,"D":2,"capacity":2}})",
                                   &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_EQ(inst.dag.label(0), "a");
    EXPECT_EQ(inst.dag.arc(0), (Arc{0, 1}));
}

TEST(InstanceFile, CyclesPropagate) {
    EXPECT_EQ(error_of([] {
                  parse_instance(R"({"schema_version":1,"nodes":[{"id":0},{"id":1}],"arcs":[[0,1],[1,0]],
                                     "params":{"d":1,"D":2,"capacity":2}})");
              }).code(),
              Errc::CycleDetected);
}

TEST(InstanceFile, BackwardDelaysWarn) {
    std::vector<std::string> warnings;
    parse_instance(R"({"schema_version":1,"nodes":[],"arcs":[],"params":{"d":3,"D":2,"capacity":2}})", &warnings);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(ClusteringFile, SigmaByLabels) {
    Instance fig2 = fixtures::fig2();
    Clustering c = parse_clustering(fixtures::slurp(fixtures::data_path("fig2_sigma.json")), &fig2);
    EXPECT_EQ(c, Clustering({0, 0, 1, 2, 1, 2}));
    EXPECT_EQ(emit_clustering(c), R"({"clusters":[[0,1],[2,4],[3,5]],"schema_version":1})");
    EXPECT_EQ(network_delay(fig2, c).delay, 9);
}

TEST(ClusteringFile, EmptyOnEmptyInstance) {
    Instance empty = make_instance(build_dag(0, {}), {});
    Clustering c = parse_clustering(R"({"clusters":[],"schema_version":1})", &empty);
    EXPECT_EQ(c.node_count(), 0u);
    EXPECT_EQ(emit_clustering(c), R"({"clusters":[],"schema_version":1})");
}

TEST(ClusteringFile, RoundTripProperty) {
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = rng.below(12);
        std::vector<ClusterId> a(n);
        for (auto& x : a) x = static_cast<ClusterId>(rng.below(n));
        Clustering c(a);
        EXPECT_EQ(parse_clustering(emit_clustering(c)), c);
    }
}

TEST(ClusteringFile, NodeSetMismatch) {
    Instance fig2 = fixtures::fig2();
    EXPECT_EQ(error_of([&] { parse_clustering(R"({"clusters":[[0,1],[2,3]],"schema_version":1})", &fig2); }).code(),
              Errc::NodeSetMismatch);
    EXPECT_EQ(error_of([&] { parse_clustering(R"({"clusters":[["s","zz"]],"schema_version":1})", &fig2); }).code(),
              Errc::NodeSetMismatch);
    EXPECT_EQ(error_of([] { parse_clustering(R"({"clusters":[["s"]],"schema_version":1})"); }).code(), Errc::ParseError);
}

TEST(Dimacs, SingleClause) {
    CnfFormula f = parse_dimacs("p cnf 3 1\n1 2 3 0\n");
    EXPECT_EQ(f.num_vars, 3u);
    EXPECT_EQ(f.clauses, (std::vector<std::vector<int>>{{1, 2, 3}}));
}

TEST(Dimacs, NegatedLiteralCommentsAndPercent) {
    CnfFormula f = parse_dimacs("c hello\np cnf 3 2\n-1 2\n 3 0 1 2 3 0\n%\n0\n");
    EXPECT_EQ(f.clauses, (std::vector<std::vector<int>>{{-1, 2, 3}, {1, 2, 3}}));
}

TEST(Dimacs, Errors) {
    EXPECT_EQ(error_of([] { parse_dimacs("1 2 3 0\n"); }).code(), Errc::ParseError);
    EXPECT_EQ(error_of([] { parse_dimacs("c only comments\n"); }).code(), Errc::ParseError);
    EXPECT_EQ(error_of([] { parse_dimacs("p cnf 3 2\n1 2 3 0\n"); }).code(), Errc::ParseError);
    EXPECT_EQ(error_of([] { parse_dimacs("p cnf 2 1\n1 2 3 0\n"); }).code(), Errc::ParseError);
    EXPECT_EQ(error_of([] { parse_dimacs("p cnf 3 1\n1 2 3\n"); }).code(), Errc::ParseError);
    Error e = error_of([] { parse_dimacs("p cnf 3 1\n1 x 3 0\n"); });
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
}

TEST(Dimacs, ShippedFiles) {
    CnfFormula f = parse_dimacs(fixtures::slurp(fixtures::data_path("two_clauses.cnf")));
    EXPECT_EQ(f.clauses.size(), 2u);
    EXPECT_EQ(parse_dimacs(emit_dimacs(f)), f);
}

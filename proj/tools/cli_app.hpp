#pragma once

// Command-line surface. Kept in a header so tests can drive run_cli with
// string streams instead of spawning processes.
//
// Exit codes: 0 success, 1 infeasible clustering or failed verification,
// 2 usage, parse, precondition, or guard-cap errors.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "dagclust/dagclust.hpp"

namespace dagclust::cli {

enum Exit : int { kOk = 0, kFailed = 1, kUsage = 2 };

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::ParseError, "cannot write '" + path + "'");
    out << text << '\n';
}

inline json path_json(const Path& p) { return p.nodes; }

inline json labels_json(const Dag& g, const std::vector<NodeId>& nodes) {
    json a = json::array();
    for (NodeId v : nodes) a.push_back(g.display_name(v));
    return a;
}

/// Prints a result either as one compact JSON line or, with --human, as an
/// aligned key/value table.
class Printer {
public:
    Printer(std::ostream& out, bool human) : out_(out), human_(human) {}

    void emit(const json& row) {
        if (!human_) {
            out_ << row.dump() << '\n';
            return;
        }
        std::size_t width = 0;
        for (auto it = row.begin(); it != row.end(); ++it) width = std::max(width, it.key().size());
        for (auto it = row.begin(); it != row.end(); ++it) {
            std::string v = it->is_string() ? it->get<std::string>() : it->dump();
            out_ << it.key() << std::string(width - it.key().size() + 2, ' ') << v << '\n';
        }
        out_ << '\n';
    }

private:
    std::ostream& out_;
    bool human_;
};

struct Options {
    bool human = false;

    std::string set;
    Delay inter_delay = 1;
    std::string cnf_file;
    Delay d = 1;
    Delay D = 2;
    std::string output;

    std::string alg = "approx2";
    std::string tiebreak = "lex";
    std::string instance_file;
    std::string clustering_file;

    std::size_t nodes = 8;
    std::size_t max_arcs = 15;
    std::size_t seeds = 100;
    std::uint64_t seed = 1;
};

inline TieBreakPolicy parse_tiebreak(const std::string& s) {
    return s == "adversarial" ? TieBreakPolicy::AdversarialCenterFirst : TieBreakPolicy::Lexicographic;
}

inline std::vector<std::int64_t> parse_set(const std::string& s) {
    std::vector<std::int64_t> v;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(Errc::ParseError, "--set: '" + item + "' is not an integer");
        }
    }
    return v;
}

/// Writes `text` to opt.output when given and reports a summary row, else
/// prints `text` itself.
inline void deliver(const Options& opt, Printer& pr, std::ostream& out, const std::string& text, json summary) {
    if (opt.output.empty()) {
        out << text << '\n';
        return;
    }
    write_file(opt.output, text);
    summary["output"] = opt.output;
    pr.emit(summary);
}

inline json instance_summary(const std::string& kind, const Instance& inst) {
    return {{"generated", kind}, {"nodes", inst.dag.node_count()}, {"arcs", inst.dag.arc_count()}};
}

inline int cmd_gen_partition(const Options& opt, Printer& pr, std::ostream& out) {
    const auto set = parse_set(opt.set);
    const auto p = gen_partition_instance(set, opt.inter_delay);
    deliver(opt, pr, out, emit_instance(p.instance), instance_summary("partition", p.instance));
    return kOk;
}

inline int cmd_gen_cnf(const Options& opt, Printer& pr, std::ostream& out) {
    const CnfFormula f = parse_dimacs(read_file(opt.cnf_file));
    const auto g = gen_cnf_instance(f, {opt.d, opt.D, 2, true});
    json s = instance_summary("cnf", g.instance);
    s["clauses"] = f.clauses.size();
    s["threshold"] = g.meta.threshold(g.instance.params);
    deliver(opt, pr, out, emit_instance(g.instance), s);
    return kOk;
}

inline int cmd_gen_bridge(const Options& opt, Printer& pr, std::ostream& out) {
    const Instance inst = gen_bridge({opt.d, opt.D, 2, false});
    deliver(opt, pr, out, emit_instance(inst), instance_summary("bridge", inst));
    return kOk;
}

inline Instance load_instance(const std::string& path, std::ostream& err) {
    std::vector<std::string> warnings;
    Instance inst = parse_instance(read_file(path), &warnings);
    for (const auto& w : warnings) err << "warning: " << path << ": " << w << '\n';
    return inst;
}

inline int cmd_solve(const Options& opt, Printer& pr, std::ostream& err) {
    const Instance inst = load_instance(opt.instance_file, err);
    const Caps caps = caps_from_env();
    Solution s;
    if (opt.alg == "approx2") {
        s.clustering = approx2(inst, parse_tiebreak(opt.tiebreak)).clustering;
        s.report = network_delay(inst, s.clustering);
    } else if (opt.alg == "tree") {
        s = tree_exact(inst);
    } else if (opt.alg == "peel") {
        s = tree_leaf_peeling(inst);
    } else if (opt.alg == "matching") {
        s = brute_force_matching_opt(inst, caps.matchings);
    } else {
        s = brute_force_opt(inst, caps.brute_nodes);
    }
    if (!opt.output.empty()) write_file(opt.output, emit_clustering(s.clustering));
    json row{{"alg", opt.alg},
             {"delay", s.report.delay},
             {"critical_path", path_json(s.report.critical_path)},
             {"critical_path_labels", labels_json(inst.dag, s.report.critical_path.nodes)},
             {"clusters", s.clustering.blocks()},
             {"feasible", validate(inst, s.clustering).feasible}};
    if (opt.alg == "approx2") row["tiebreak"] = opt.tiebreak;
    pr.emit(row);
    return kOk;
}

inline int cmd_eval(const Options& opt, Printer& pr, std::ostream& err) {
    const Instance inst = load_instance(opt.instance_file, err);
    const Clustering c = parse_clustering(read_file(opt.clustering_file), &inst);
    const FeasibilityReport f = validate(inst, c);
    const DelayReport r = network_delay(inst, c);
    json over = json::array();
    for (const ClusterLoad& l : f.over_capacity)
        over.push_back({{"cluster", c.blocks()[l.cluster]}, {"weight", l.weight}});
    pr.emit({{"delay", r.delay},
             {"critical_path", path_json(r.critical_path)},
             {"critical_path_labels", labels_json(inst.dag, r.critical_path.nodes)},
             {"feasible", f.feasible},
             {"over_capacity", over}});
    return f.feasible ? kOk : kFailed;
}

inline int cmd_verify_bridge(const Options& opt, Printer& pr) {
    const LemmaReport r = verify_bridge_lemma(opt.d, opt.D, caps_from_env());
    json row{{"lemma", "bridge"},   {"d", opt.d},
             {"D", opt.D},          {"pass", r.pass},
             {"matchings", r.matchings_checked},
             {"expected_max", r.expected_max},
             {"min_delay", r.min_seen},
             {"max_delay", r.max_seen}};
    if (!r.pass) {
        row["failure"] = r.failure;
        json m = json::array();
        for (const Edge& e : r.counterexample->edges()) m.push_back({e.u, e.v});
        row["counterexample"] = m;
    }
    pr.emit(row);
    return r.pass ? kOk : kFailed;
}

inline int cmd_verify_structure(const Options& opt, Printer& pr) {
    const Caps caps = caps_from_env();
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < opt.seeds; ++i) {
        const std::uint64_t seed = opt.seed + i;
        Rng rng(seed);
        const Instance inst = make_instance(random_dag(rng, opt.nodes, opt.max_arcs), unit_params(opt.d, opt.D));
        const Delay opt_v = brute_force_opt(inst, caps.brute_nodes).report.delay;
        const Delay m_v = brute_force_matching_opt(inst, caps.matchings).report.delay;
        if (opt_v != m_v) {
            ++mismatches;
            pr.emit({{"seed", seed}, {"brute_force_opt", opt_v}, {"matching_opt", m_v}, {"mismatch", true}});
        }
    }
    pr.emit({{"lemma", "structure"},
             {"nodes", opt.nodes},
             {"seeds", opt.seeds},
             {"first_seed", opt.seed},
             {"mismatches", mismatches},
             {"pass", mismatches == 0}});
    return mismatches == 0 ? kOk : kFailed;
}

inline int cmd_report_ratio(const Options& opt, Printer& pr) {
    const Caps caps = caps_from_env();
    // Best ratio so far as a fraction alg/opt; 1/1 when no instance is worse.
    Delay best_alg = 1, best_opt = 1;
    std::uint64_t worst_seed = opt.seed;
    std::string worst_policy = "lex";
    std::size_t violations = 0;
    for (std::size_t i = 0; i < opt.seeds; ++i) {
        const std::uint64_t seed = opt.seed + i;
        Rng rng(seed);
        const Instance inst = make_instance(random_dag(rng, opt.nodes, opt.max_arcs), unit_params(opt.d, opt.D));
        const Delay o = brute_force_opt(inst, caps.brute_nodes).report.delay;
        for (const char* name : {"lex", "adversarial"}) {
            const Delay a = network_delay(inst, approx2(inst, parse_tiebreak(name)).clustering).delay;
            if (a < o || a > 2 * o) ++violations;
            if (o > 0 && a * best_opt > best_alg * o) {
                best_alg = a;
                best_opt = o;
                worst_seed = seed;
                worst_policy = name;
            }
        }
    }
    const Delay g = std::gcd(best_alg, best_opt);
    pr.emit({{"report", "ratio"},
             {"nodes", opt.nodes},
             {"seeds", opt.seeds},
             {"first_seed", opt.seed},
             {"d", opt.d},
             {"D", opt.D},
             {"max_ratio", std::to_string(best_alg / g) + "/" + std::to_string(best_opt / g)},
             {"max_ratio_value", static_cast<double>(best_alg) / static_cast<double>(best_opt)},
             {"worst_seed", worst_seed},
             {"worst_tiebreak", worst_policy},
             {"bound_violations", violations}});
    return violations == 0 ? kOk : kFailed;
}

inline int exit_code_for(Errc code) {
    switch (code) {
    case Errc::NoFeasibleClustering: return kFailed;
    default: return kUsage;
    }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Delay-minimizing clustering of DAGs under the two-level delay model"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--human", opt.human, "Aligned tables instead of JSON lines");

    auto add_params = [&](CLI::App* c) {
        c->add_option("--d", opt.d, "Intra-cluster arc delay")->capture_default_str();
        c->add_option("--D", opt.D, "Inter-cluster arc delay")->capture_default_str();
    };
    auto add_random = [&](CLI::App* c, std::size_t nodes, std::size_t seeds) {
        opt.nodes = nodes;
        opt.seeds = seeds;
        c->add_option("--nodes", opt.nodes, "Nodes per random DAG")->capture_default_str();
        c->add_option("--max-arcs", opt.max_arcs, "Arc cap per random DAG")->capture_default_str();
        c->add_option("--seeds", opt.seeds, "Number of instances")->capture_default_str();
        c->add_option("--seed", opt.seed, "First seed; instance i uses seed + i")->capture_default_str();
        add_params(c);
    };

    auto* gen = app.add_subcommand("gen", "Generate reduction instances");
    gen->require_subcommand(1);
    auto* gen_partition = gen->add_subcommand("partition", "Weighted instance from a PARTITION multiset");
    gen_partition->add_option("--set", opt.set, "Comma-separated positive integers")->required();
    gen_partition->add_option("--inter-delay", opt.inter_delay, "Inter-cluster delay D")->capture_default_str();
    gen_partition->add_option("-o,--output", opt.output, "Instance file to write");
    auto* gen_cnf = gen->add_subcommand("cnf", "Unweighted instance from a 3-CNF formula");
    gen_cnf->add_option("input", opt.cnf_file, "DIMACS CNF file")->required();
    gen_cnf->add_option("-o,--output", opt.output, "Instance file to write");
    add_params(gen_cnf);
    auto* gen_br = gen->add_subcommand("bridge", "The 10-node bridge DAG");
    gen_br->add_option("-o,--output", opt.output, "Instance file to write");
    add_params(gen_br);

    auto* solve = app.add_subcommand("solve", "Cluster an instance");
    solve->add_option("--alg", opt.alg, "Algorithm")
        ->check(CLI::IsMember({"approx2", "tree", "brute", "matching", "peel"}))
        ->capture_default_str();
    solve->add_option("--tiebreak", opt.tiebreak, "Central-arc rule for approx2")
        ->check(CLI::IsMember({"lex", "adversarial"}))
        ->capture_default_str();
    solve->add_option("instance", opt.instance_file, "Instance file")->required();
    solve->add_option("-o,--output", opt.output, "Clustering file to write");

    auto* eval = app.add_subcommand("eval", "Score a clustering");
    eval->add_option("instance", opt.instance_file, "Instance file")->required();
    eval->add_option("clustering", opt.clustering_file, "Clustering file")->required();

    auto* verify = app.add_subcommand("verify", "Check a lemma exhaustively");
    verify->require_subcommand(1);
    auto* v_bridge = verify->add_subcommand("bridge-lemma", "Every maximal matching of the bridge has delay d+3D");
    add_params(v_bridge);
    auto* v_struct = verify->add_subcommand("structure-lemma", "Maximal-matching optimum equals the partition optimum");
    add_random(v_struct, 8, 100);

    auto* report = app.add_subcommand("report", "Empirical summaries");
    report->require_subcommand(1);
    auto* r_ratio = report->add_subcommand("ratio", "Largest approx2/OPT ratio over random DAGs");
    add_random(r_ratio, 10, 500);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    Printer pr(out, opt.human);
    try {
        if (gen_partition->parsed()) return cmd_gen_partition(opt, pr, out);
        if (gen_cnf->parsed()) return cmd_gen_cnf(opt, pr, out);
        if (gen_br->parsed()) return cmd_gen_bridge(opt, pr, out);
        if (solve->parsed()) return cmd_solve(opt, pr, err);
        if (eval->parsed()) return cmd_eval(opt, pr, err);
        if (v_bridge->parsed()) return cmd_verify_bridge(opt, pr);
        if (v_struct->parsed()) return cmd_verify_structure(opt, pr);
        if (r_ratio->parsed()) return cmd_report_ratio(opt, pr);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return kUsage;
}

} // namespace dagclust::cli

// Library walkthrough: build a small DAG, solve it three ways, print results.

#include <iostream>

#include "dagclust/dagclust.hpp"

int main() {
    using namespace dagclust;

    // Two longest 3-arc paths share the arc 5->0.
    const Dag g = build_dag(7, {{0, 1}, {0, 2}, {0, 4}, {2, 6}, {3, 1}, {4, 1}, {5, 0}});
    const Instance inst = make_instance(g, unit_params(1, 10));

    const ApproxResult approx = approx2(inst);
    const Solution opt = brute_force_opt(inst);
    const Solution matching = brute_force_matching_opt(inst);

    std::cout << "lower bound  " << longest_path_lower_bound(inst) << '\n'
              << "approx2      " << network_delay(inst, approx.clustering).delay << "  "
              << emit_clustering(approx.clustering) << '\n'
              << "optimum      " << opt.report.delay << "  " << emit_clustering(opt.clustering) << '\n'
              << "matching opt " << matching.report.delay << '\n';
    for (const ApproxStep& s : approx.trace.steps) {
        const Arc c = g.arc(s.central_arc);
        std::cout << "  step: path of " << s.chosen_path.arc_count() << " arcs, d-arc " << c.tail << "->" << c.head
                  << '\n';
    }
}

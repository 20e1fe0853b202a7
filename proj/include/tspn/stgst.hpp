#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tspn/dp_graph.hpp"

namespace tspn {

struct FractionalSolution {
    std::vector<double> x;           // per edge of the DAG
    std::vector<double> node_value;  // probability mass reaching each node
    double objective = 0.0;
    std::vector<std::pair<SolutionTree, double>> support;  // trees with positive weight
    int iterations = 0;
};

/// LP relaxation over convex combinations of solution trees with one
/// coverage row per group, solved by column generation (pricing is a
/// min-cost tree DP with group duals as node rewards).
FractionalSolution lp_relax(const DpGraph& h, const GroupFamily& groups, double tol = 1e-7);

/// Top-down sampling: a reached subproblem node picks one out-edge with
/// probability x(e) / out-mass, a combination node keeps all children.
SolutionTree round_once(const DpGraph& h, const FractionalSolution& x, std::mt19937_64& rng);
SolutionTree round_once(const DpGraph& h, const FractionalSolution& x, std::uint64_t seed);

struct ExactResult {
    SolutionTree tree;
    double cost = 0.0;
    std::size_t memo_entries = 0;
};

/// Minimum-cost solution tree touching every group, by a DP over
/// (node, group subset).  Throws BudgetExceeded past `budget` memo entries.
ExactResult exact_stgst(const DpGraph& h, const GroupFamily& groups, std::size_t budget = 10000);

/// Every solution tree of a (small) DAG; throws BudgetExceeded past `cap`.
std::vector<SolutionTree> enumerate_solution_trees(const DpGraph& h, std::size_t cap = 100000);

/// covered[i] = tree contains a node of group i.
std::vector<char> covered_groups(const SolutionTree& t, const GroupFamily& groups);

struct RoundingReport {
    int samples = 0;
    double lp_objective = 0.0;
    std::vector<SolutionTree> trees;
    std::vector<double> costs;
    std::vector<int> coverage;    // per group: samples covering it
    std::vector<char> uncovered;  // per group: covered by no sample
    double mean_cost = 0.0;
};

/// ceil(c ln(groups) ln(nodes)), at least 1 and at most `cap`.
int sample_count(double c, int groups, int nodes, int cap);

RoundingReport solve_stgst(const DpGraph& h, const GroupFamily& groups, double c, std::uint64_t seed,
                           int sample_cap = 2000);

}  // namespace tspn

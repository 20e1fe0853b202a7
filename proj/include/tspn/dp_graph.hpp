#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tspn/quadtree.hpp"

namespace tspn {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { Subproblem, Combination };

struct DpNode {
    NodeKind kind = NodeKind::Subproblem;
    int first = 0;  // out-edges are edges[first, first + count)
    int count = 0;
    int cell = -1;
    int state = -1;
    int visit = -1;  // leaf subproblems only
};

struct DpEdge {
    int from = 0;
    int to = 0;
    double cost = 0.0;
};

struct DagOptions {
    int m = 1;
    int r = 2;
    bool non_crossing = true;
    bool tsp_mode = false;  // every point leaf must be visited
    std::size_t node_budget = 5'000'000;
};

/// Geometry behind a DAG built from a quadtree; absent for hand-made DAGs.
struct DpContext {
    PerturbedInstance pi;
    ShiftedQuadtree tree;
    DagOptions opt;
    const CombinationTemplate* tmpl = nullptr;
};

struct DagStats {
    std::size_t nodes = 0;
    std::size_t subproblems = 0;
    std::size_t combinations = 0;
    std::size_t edges = 0;
    int height = 0;
    int max_out_degree = 0;
};

class DpGraph {
public:
    std::vector<DpNode> nodes;
    std::vector<DpEdge> edges;
    int root = 0;
    std::shared_ptr<const DpContext> ctx;

    /// Builds a graph from explicit adjacency (edge order within a node is kept).
    static DpGraph from_adjacency(const std::vector<NodeKind>& kinds,
                                  const std::vector<std::vector<std::pair<int, double>>>& out, int root);

    int size() const { return static_cast<int>(nodes.size()); }
    std::span<const DpEdge> out(int v) const { return {edges.data() + nodes[v].first, static_cast<std::size_t>(nodes[v].count)}; }
    bool is_leaf(int v) const { return nodes[v].kind == NodeKind::Subproblem && nodes[v].count == 0; }
    DagStats stats() const;

    /// Subproblem node for (cell, state[, visit]); -1 if absent.
    int find(int cell, int state, int visit = -1) const;

    std::unordered_map<std::uint64_t, int> index;
};

DpGraph build_dag(const PerturbedInstance& pi, const ShiftedQuadtree& tree, const DagOptions& opt);

/// S_i: leaf subproblems with visit bit 1 whose cell holds a point of group i.
using GroupFamily = std::vector<std::vector<int>>;
GroupFamily groups(const DpGraph& h);

struct SolutionTree {
    std::vector<int> nodes;  // sorted
    std::vector<int> edges;  // indices into DpGraph::edges
};

bool validate_solution_tree(const SolutionTree& t, const DpGraph& h);
double tree_cost(const SolutionTree& t, const DpGraph& h);
/// Completes a tree from one chosen out-edge per reached subproblem node.
SolutionTree tree_from_choice(const DpGraph& h, const std::vector<int>& choice);

/// Minimum-cost solution tree (no coverage constraints); ties go to the lowest edge.
SolutionTree min_cost_tree(const DpGraph& h);

/// Tour realized by a solution tree.  `fine` holds waypoints in fine units,
/// `seg_leaf[i]` the leaf cell of the segment leaving waypoint i, and
/// `tour.meta[i]` the perturbed point visited at waypoint i (or -1).
struct TreeTour {
    Tour tour;
    std::vector<IPoint> fine;
    std::vector<int> seg_leaf;
    std::vector<int> visited;
    double cost = 0.0;
};

TreeTour tree_to_tour(const SolutionTree& t, const DpGraph& h);
SolutionTree tour_to_tree(const TreeTour& f, const DpGraph& h);

/// Replaces each visited snapped point by the original points merged into it.
Tour unsnap(const TreeTour& f, const PerturbedInstance& pi, const DiscreteInstance& inst);

/// Drops waypoints that are not instance points (portal crossings).  A tour
/// with no instance point is returned unchanged.
Tour shortcut_to_points(const Tour& t);

struct DpTspResult {
    Tour tour;       // original coordinates
    double cost = 0.0;
    DagStats stats;
    IPoint shift{0, 0, 0};
};

/// Classic TSP through the quadtree DP on one shift.
DpTspResult dp_tsp(const DiscreteInstance& inst, const PerturbedInstance& pi, const ShiftedQuadtree& tree, int m, int r,
                   std::size_t node_budget = 5'000'000);

/// Best of `shifts` random shifts for plain TSP on all points of `inst`.
DpTspResult dp_tsp_best(const DiscreteInstance& inst, int m, int r, int shifts, std::uint64_t seed,
                        std::size_t node_budget = 5'000'000);

void dump_dag(std::ostream& out, const DpGraph& h);

}  // namespace tspn

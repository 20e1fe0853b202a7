#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tspn/dp_graph.hpp"
#include "tspn/instance.hpp"

namespace tspn {

struct RunConfig {
    int m = 1;
    int r = 0;  // 0: 2 in the plane, 1 in space
    int shifts = 4;
    double c = 4.0;  // rounding constant: samples = ceil(c ln n ln |H|)
    std::uint64_t seed = 1;
    std::size_t node_budget = 2'000'000;
    int sample_cap = 2000;
    bool v0_smallest_group = true;  // guess v0 only among points of the smallest group
    int max_guesses = 0;            // 0: all
    bool prune = true;
    bool oracle = true;  // compare with an exact oracle when small enough

    int effective_r(int dim) const { return r > 0 ? r : (dim == 2 ? 2 : 1); }
};

struct RunRecord {
    int guess = -1;
    int shift = -1;
    int v0 = -1;
    double R0 = 0.0;
    double R = 0.0;
    std::string status;  // ok | trivial | pruned | budget | infeasible | failed
    DagStats dag;
    double lp_objective = 0.0;
    int samples = 0;
    int distinct_trees = 0;
    int uncovered = 0;  // groups missed by every sample
    int detours = 0;
    double cost = 0.0;
};

struct RunReport {
    std::vector<RunRecord> records;
    Tour tour;  // best candidate, original coordinates
    double cost = 0.0;
    bool feasible = false;
    int best_record = -1;
    int detours = 0;
    std::optional<double> oracle_cost;
    std::string oracle_method;
    double seconds = 0.0;

    std::optional<double> ratio() const {
        if (!oracle_cost) return std::nullopt;
        if (*oracle_cost <= 1e-12) return cost <= 1e-9 ? 1.0 : std::numeric_limits<double>::infinity();
        return cost / *oracle_cost;
    }
};

struct StitchResult {
    Tour tour;
    double mst_cost = 0.0;  // one copy of the joining tree
    int components = 0;
    int detours = 0;
    double detour_cost = 0.0;  // sum of closest distances used by detours
};

/// Union of closed tours joined into one: components are linked by a doubled
/// minimum spanning tree on closest waypoint pairs, the Euler circuit is
/// shortcut, and every group of `uncovered` still missed gets a detour to its
/// point nearest to the tour, inserted after the nearest waypoint.
StitchResult stitch_and_detour(const std::vector<Tour>& tours, const DiscreteInstance& inst,
                               const std::vector<int>& uncovered);

RunReport run_tspn(const DiscreteInstance& inst, const RunConfig& cfg);

/// Discretizes, runs run_tspn and re-checks the tour against the lines
/// (`feasible` then refers to the lines, tolerance 1e-6).
RunReport run_line_tspn(const LineInstance& inst, const RunConfig& cfg, DiscreteInstance* discrete = nullptr);

}  // namespace tspn

#pragma once

#include <string>
#include <vector>

#include "tspn/instance.hpp"

namespace tspn {

struct OracleResult {
    Tour tour;
    double cost = 0.0;
    std::string method;
    bool exact = true;  // false: converged to a tolerance
    std::vector<int> order;
    std::vector<double> history;  // smoothed objective per accepted step (line oracles)
};

struct HeldKarpLimits {
    int max_groups = 14;
    int max_points = 64;
};

/// Exact group TSP: DP over (covered-group mask, last point), started from
/// every point of the smallest group.
OracleResult held_karp_groups(const DiscreteInstance& inst, HeldKarpLimits limits = {});

/// Shortest closed tour touching the lines in the given cyclic order.  The
/// objective is convex; it is minimized with a damped Newton method on the
/// smoothed lengths sqrt(|v|^2 + mu^2) while mu decreases to ~tol, so the
/// result is within n * mu_final of the optimum.
OracleResult tour_fixed_line_order(const std::vector<Line>& lines, double tol = 1e-8, int max_iter = 100000);

/// Minimum over all cyclic orders (rotations and reflections removed).
OracleResult exact_line_tspn(const LineInstance& inst, int max_lines = 8, double tol = 1e-8);

}  // namespace tspn

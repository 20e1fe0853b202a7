#pragma once

#include <vector>

#include "tspn/geometry.hpp"

namespace tspn {

struct LineInstance {
    int dim = 3;
    std::vector<Line> lines;

    int n() const { return static_cast<int>(lines.size()); }
};

/// Neighborhoods given as finite point sets.  `points` is the deduplicated
/// union P; `members[p]` lists the neighborhoods containing point p and
/// `group_points[i]` the points of neighborhood i.
struct DiscreteInstance {
    int dim = 2;
    std::vector<Vec> points;
    std::vector<std::vector<int>> members;
    std::vector<std::vector<int>> group_points;

    /// Coordinates closer than 1e-12 (relative to their magnitude) are merged.
    static DiscreteInstance from_groups(int dim, const std::vector<std::vector<Vec>>& groups);

    int n() const { return static_cast<int>(group_points.size()); }
    int N() const { return static_cast<int>(points.size()); }
    std::vector<std::vector<Vec>> groups() const;
};

struct Flat {
    Vec base;
    std::vector<Vec> basis;  // orthonormal
};

struct FlatInstance {
    int dim = 4;
    std::vector<Flat> flats;
};

enum class DiscretizeScheme { ClosestPairs };

DiscreteInstance discretize_lines(const LineInstance& inst, DiscretizeScheme scheme = DiscretizeScheme::ClosestPairs);

/// Each line l of a 3-d instance becomes the k-flat l x R^{k-1} in R^d, using
/// the extra coordinate axes e_4 .. e_{k+2} as the additional directions.
FlatInstance lift_to_flats(const LineInstance& inst, int k, int d);

Tour project_tour(const Tour& t, int to_dim);

/// Smallest distance from any waypoint to any point of group i.
double group_gap(const Tour& t, const DiscreteInstance& inst, int i);
/// Smallest distance from the closed polyline to a line / flat.
double line_gap(const Tour& t, const Line& l);
double flat_gap(const Tour& t, const Flat& f);

bool tour_feasible(const Tour& t, const DiscreteInstance& inst, double tol = 1e-9);
bool tour_feasible(const Tour& t, const LineInstance& inst, double tol = 1e-6);
bool tour_feasible(const Tour& t, const FlatInstance& inst, double tol = 1e-6);

}  // namespace tspn

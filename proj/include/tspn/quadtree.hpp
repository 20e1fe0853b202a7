#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tspn/instance.hpp"
#include "tspn/multipath.hpp"

namespace tspn {

using IPoint = std::array<long long, 3>;

/// One (v0, R) guess.  `retained` are the points within distance R of v0.
struct GuessContext {
    int v0 = 0;
    double R0 = 0.0;
    double R = 0.0;
    double L0 = 0.0;
    std::vector<int> retained;

    bool trivial() const { return R0 == 0.0; }
};

/// R0(v0) = max over neighborhoods of the distance from v0 to its nearest point.
double guess_radius(const DiscreteInstance& inst, int v0);

/// All feasible guesses: every v0 in P and every power of two R in [R0, 4 n R0].
/// A v0 with R0 = 0 yields a single trivial context.
std::vector<GuessContext> enumerate_guesses(const DiscreteInstance& inst);

/// A context keeping every point (used for plain TSP runs).
GuessContext covering_context(const DiscreteInstance& inst);

struct PerturbedPoint {
    IPoint x{0, 0, 0};
    std::vector<int> groups;
    std::vector<int> originals;  // point ids in the source instance
};

/// Retained points snapped to integer coordinates.  An integer unit is
/// `unit` original lengths; coordinates lie in [0, L).
struct PerturbedInstance {
    int dim = 2;
    std::vector<PerturbedPoint> pts;
    double g = 0.0;
    double unit = 0.0;
    Vec origin;
    long long L = 1;
    int n_groups = 0;

    int size() const { return static_cast<int>(pts.size()); }
    /// Maps a point given in integer units divided by `scale` back to the original frame.
    Vec to_original(const Vec& scaled, double scale = 1.0) const;
};

PerturbedInstance perturb(const DiscreteInstance& inst, const GuessContext& ctx);

struct Cell {
    IPoint lo{0, 0, 0};
    long long side = 0;
    int level = 0;
    int parent = -1;
    std::array<int, 8> child{-1, -1, -1, -1, -1, -1, -1, -1};
    int point = -1;  // perturbed point index, leaves only
    int count = 0;   // perturbed points in the (half-open) box

    bool leaf() const { return child[0] < 0; }
};

struct ShiftedQuadtree {
    int dim = 2;
    long long L = 1;
    IPoint shift{0, 0, 0};
    std::vector<Cell> cells;  // cells[0] is the root
    int height = 0;

    int leaf_of(const IPoint& x) const;
    bool contains(int cell, const IPoint& x) const;
};

/// Dissection of the box [-a, 2L - a)^d, split until a cell holds at most one
/// point; the root is always split.
ShiftedQuadtree build_quadtree(const PerturbedInstance& pi, const IPoint& shift);

IPoint random_shift(const PerturbedInstance& pi, std::mt19937_64& rng);

/// Portal coordinates of a cell in fine units (integer units times k = m + 1),
/// ordered as in the PortalLayout.
std::vector<IPoint> portals(const Cell& c, const PortalLayout& layout);
IPoint portal_fine(const Cell& c, const PortalLayout& layout, int p);

struct LeafSolution {
    double cost = 0.0;  // same units as the input coordinates
    int detour = -1;    // path receiving the point, -1 if none
    bool feasible = true;
};

/// Paths between paired portals are straight; if `visit`, the point is spliced
/// into the path where the detour is smallest.  A closed tour at the point has
/// cost 0.
LeafSolution solve_leaf(const std::vector<std::pair<Vec, Vec>>& paths, const std::optional<Vec>& point, bool visit,
                        bool closed = false);

}  // namespace tspn

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tspn/geometry.hpp"
#include "tspn/instance.hpp"

namespace tspn {

/// Three classes of n vertices each; vertex (a, i) has id a * n + i with a in
/// {0,1,2} and i in {0..n-1}.  Edges join different classes only.
struct TripartiteGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    /// Pads the classes with isolated vertices to a common size.  `classes`
    /// lists the class (0..2) of each input vertex; `edges` use input ids.
    static TripartiteGraph make(const std::vector<int>& classes, const std::vector<std::pair<int, int>>& edges);
    static TripartiteGraph complete(int n);

    int id(int a, int i) const { return a * n + i; }
    int cls(int v) const { return v / n; }
    int index(int v) const { return v % n; }
    int vertices() const { return 3 * n; }
};

struct CubeConstruction {
    TripartiteGraph graph;
    double delta = 0.0;       // 1 / (4000 n)
    double delta_star = 0.0;  // sqrt(99.75) delta
    double sigma = 0.0;       // flattened cube edge length

    std::vector<Vec> P;     // per vertex id, on the unit cube
    std::vector<Vec> Pbar;  // flattened
    std::vector<Line> lines;     // per graph edge, unflattened
    std::vector<Line> lines_bar;
    std::array<std::pair<Vec, Vec>, 3> edge_bar;  // flattened cube edges e^a

    std::array<Vec, 3> n1, n2;   // unit normals of the flattened faces at e^a
    std::array<Vec, 3> h_normal; // bisector plane H^a
    std::array<Vec, 3> u, w;     // along e^a, and inside H^a away from it

    std::vector<Vec> Q;  // closed polygon, consecutive points delta apart
    std::array<std::pair<int, int>, 3> Qa_range;  // [first, last] indices of Q^a in Q
    std::vector<int> tri;  // per vertex id: index j such that Q[j], Q[j+1] flank the vertex

    int grid_side = 4;
    double grid_cell = 0.0;
    double ball_radius = 0.0;  // gadget ball radius, 2 * grid_side * grid_cell
    double cylinder_radius = 0.0;

    /// Gadget lines at Q[j].
    std::vector<Line> gadget(int j) const;
    /// Lines of the instance: the edge lines and, optionally, every gadget line.
    LineInstance instance(bool with_gadgets) const;
};

/// Lines through q and the points of a grid_side x grid_side grid with cell
/// `scale`, placed in the plane z = q_z + grid_side * scale.
std::vector<Line> point_gadget(const Vec& q, int grid_side, double scale);

/// The grid of a gadget is inside B(q, gadget_ball_radius).
inline double gadget_ball_radius(int grid_side, double scale) { return 2.0 * grid_side * scale; }

CubeConstruction gen_cube(const TripartiteGraph& graph, int grid_side = 4);

/// Walks Q and detours through Pbar[v] for each v in the cover.  Throws
/// std::invalid_argument naming an uncovered edge.
Tour completeness_tour_cube(const CubeConstruction& c, const std::vector<int>& cover);

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;  // worst observed value
    double bound = 0.0;
    std::string detail;
};

std::vector<CheckResult> verify_cube(const CubeConstruction& c);

/// Line feasibility of a tour for the edge lines and, at each Q point, its
/// gadget (a tour through q touches every gadget line at q).
bool cube_tour_feasible(const CubeConstruction& c, const Tour& t, double tol = 1e-9);

double gap_yes_value(int n);  // 10 + 19 delta n/2
double gap_no_value(int n);   // 10 + 19 delta (34/33)(n/2)/1.011
/// (40 n^3)^2 / (80 n^6) as an exact fraction {num, den}.
std::pair<std::int64_t, std::int64_t> gadget_identity(int n);

}  // namespace tspn

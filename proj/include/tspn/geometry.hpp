#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tspn {

using Vec = Eigen::VectorXd;

/// Thrown for malformed inputs to the geometric routines (dimension
/// mismatches, empty tours, non-unit directions).
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An infinite line in R^d stored in canonical form: `dir` is a unit vector
/// whose first non-zero coordinate is positive, and `base` is the point of the
/// line closest to the origin.  Two lines are equal iff their canonical forms
/// agree.
struct Line {
    Vec base;
    Vec dir;

    static Line through(const Vec& a, const Vec& b);
    static Line from_direction(const Vec& point, const Vec& direction);

    int dim() const { return static_cast<int>(base.size()); }
    Vec at(double t) const { return base + t * dir; }
};

/// Cyclic polyline.  `meta[i]` optionally annotates waypoint i (which
/// neighborhood, portal or gadget point it serves); -1 when unused.
struct Tour {
    std::vector<Vec> waypoints;
    std::vector<int> meta;

    Tour() = default;
    explicit Tour(std::vector<Vec> pts) : waypoints(std::move(pts)), meta(waypoints.size(), -1) {}

    std::size_t size() const { return waypoints.size(); }
    bool empty() const { return waypoints.empty(); }
    void push(const Vec& p, int tag = -1) {
        waypoints.push_back(p);
        meta.push_back(tag);
    }
};

inline constexpr double kTol = 1e-9;
inline constexpr double kParallelTol = 1e-12;

double dist(const Vec& a, const Vec& b);

double dist_point_line(const Vec& p, const Line& l);
Vec closest_point_on_line(const Vec& p, const Line& l);

/// Minimum distance between two lines in any dimension, by minimizing the
/// two-parameter quadratic.  Parallel lines fall back to a point-line distance.
double dist_line_line(const Line& l1, const Line& l2);

/// Three-dimensional closed form |<b2 - b1, d1 x d2>| / |d1 x d2|.
double dist_line_line_cross(const Line& l1, const Line& l2);

/// Point of l1 nearest to l2 (for parallel lines, the projection of l2.base).
Vec closest_point_between(const Line& l1, const Line& l2);

/// Segment [a,b] to line distance.
double dist_segment_line(const Vec& a, const Vec& b, const Line& l);

/// Segment [a,b] to the affine flat base + span(basis); `basis` must be
/// orthonormal.
double dist_segment_flat(const Vec& a, const Vec& b, const Vec& base, std::span<const Vec> basis);

double dist_point_segment(const Vec& p, const Vec& a, const Vec& b);

/// True iff the closed segment [a,b] meets the closed ball B(center, radius).
bool segment_meets_ball(const Vec& a, const Vec& b, const Vec& center, double radius);

/// The flattening map x -> (I - 0.3 J) x on R^3.
Vec flatten(const Vec& p);

/// Angle between two planes given by unit normals, in [0, pi].
double plane_angle(const Vec& n1, const Vec& n2);

double tour_cost(const Tour& t);

/// Pads (or truncates) `p` to `dim` coordinates.
Vec resize_point(const Vec& p, int dim);

}  // namespace tspn

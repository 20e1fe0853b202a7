#include "tspn/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

namespace tspn {

namespace {

void require_same_dim(const Vec& a, const Vec& b, const char* what) {
    if (a.size() != b.size()) {
        throw GeometryError(std::string(what) + ": dimension mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
    }
}

Vec canonical_direction(Vec d) {
    double n = d.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw GeometryError("line direction must be non-zero and finite");
    d /= n;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (std::abs(d[i]) > 1e-15) {
            if (d[i] < 0) d = -d;
            break;
        }
    }
    return d;
}

// min over s in [0,1] of |u + s v|^2 where u, v already live in the
// orthogonal complement of whatever we are measuring against.
double min_norm_on_segment(const Vec& u, const Vec& v) {
    double vv = v.squaredNorm();
    double s = 0.0;
    if (vv > 0.0) s = std::clamp(-u.dot(v) / vv, 0.0, 1.0);
    return (u + s * v).norm();
}

}  // namespace

Line Line::from_direction(const Vec& point, const Vec& direction) {
    require_same_dim(point, direction, "Line");
    Line l;
    l.dir = canonical_direction(direction);
    l.base = point - point.dot(l.dir) * l.dir;
    return l;
}

Line Line::through(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "Line::through");
    return from_direction(a, b - a);
}

double dist(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "dist");
    return (a - b).norm();
}

Vec closest_point_on_line(const Vec& p, const Line& l) {
    require_same_dim(p, l.base, "closest_point_on_line");
    return l.base + (p - l.base).dot(l.dir) * l.dir;
}

double dist_point_line(const Vec& p, const Line& l) {
    require_same_dim(p, l.base, "dist_point_line");
    Vec w = p - l.base;
    return (w - w.dot(l.dir) * l.dir).norm();
}

double dist_line_line(const Line& l1, const Line& l2) {
    require_same_dim(l1.base, l2.base, "dist_line_line");
    double c = l1.dir.dot(l2.dir);
    if (std::abs(c) > 1.0 - kParallelTol) return dist_point_line(l2.base, l1);
    Vec w = l1.base - l2.base;
    double a1 = l1.dir.dot(w);
    double a2 = l2.dir.dot(w);
    double den = 1.0 - c * c;
    double s = (c * a2 - a1) / den;
    double t = (a2 - c * a1) / den;
    return (w + s * l1.dir - t * l2.dir).norm();
}

double dist_line_line_cross(const Line& l1, const Line& l2) {
    if (l1.dim() != 3 || l2.dim() != 3) throw GeometryError("dist_line_line_cross: lines must be in R^3");
    Eigen::Vector3d d1 = l1.dir.head<3>();
    Eigen::Vector3d d2 = l2.dir.head<3>();
    Eigen::Vector3d n = d1.cross(d2);
    double nn = n.norm();
    if (nn < 1e-12) return dist_point_line(l2.base, l1);
    Eigen::Vector3d w = (l2.base - l1.base).head<3>();
    return std::abs(w.dot(n)) / nn;
}

Vec closest_point_between(const Line& l1, const Line& l2) {
    require_same_dim(l1.base, l2.base, "closest_point_between");
    double c = l1.dir.dot(l2.dir);
    if (std::abs(c) > 1.0 - kParallelTol) return closest_point_on_line(l2.base, l1);
    Vec w = l1.base - l2.base;
    double a1 = l1.dir.dot(w);
    double a2 = l2.dir.dot(w);
    double s = (c * a2 - a1) / (1.0 - c * c);
    return l1.at(s);
}

double dist_segment_line(const Vec& a, const Vec& b, const Line& l) {
    require_same_dim(a, l.base, "dist_segment_line");
    require_same_dim(b, l.base, "dist_segment_line");
    Vec u = a - l.base;
    Vec v = b - a;
    u -= u.dot(l.dir) * l.dir;
    v -= v.dot(l.dir) * l.dir;
    return min_norm_on_segment(u, v);
}

double dist_segment_flat(const Vec& a, const Vec& b, const Vec& base, std::span<const Vec> basis) {
    require_same_dim(a, base, "dist_segment_flat");
    require_same_dim(b, base, "dist_segment_flat");
    Vec u = a - base;
    Vec v = b - a;
    for (const Vec& e : basis) {
        u -= u.dot(e) * e;
        v -= v.dot(e) * e;
    }
    return min_norm_on_segment(u, v);
}

double dist_point_segment(const Vec& p, const Vec& a, const Vec& b) {
    require_same_dim(p, a, "dist_point_segment");
    return min_norm_on_segment(a - p, b - a);
}

bool segment_meets_ball(const Vec& a, const Vec& b, const Vec& center, double radius) {
    require_same_dim(a, center, "segment_meets_ball");
    // |a - c + s(b - a)|^2 = r^2 has a root in [0,1], or an endpoint is inside.
    Vec u = a - center;
    Vec v = b - a;
    double A = v.squaredNorm();
    double B = 2.0 * u.dot(v);
    double C = u.squaredNorm() - radius * radius;
    const double guard = 1e-12 * std::max(1.0, radius * radius);
    if (C <= guard) return true;
    if ((b - center).squaredNorm() - radius * radius <= guard) return true;
    if (A <= 0.0) return false;
    double disc = B * B - 4.0 * A * C;
    if (disc < -guard * A) return false;
    double sq = std::sqrt(std::max(disc, 0.0));
    double s1 = (-B - sq) / (2.0 * A);
    double s2 = (-B + sq) / (2.0 * A);
    return (s1 >= -1e-12 && s1 <= 1.0 + 1e-12) || (s2 >= -1e-12 && s2 <= 1.0 + 1e-12);
}

Vec flatten(const Vec& p) {
    if (p.size() != 3) throw GeometryError("flatten: expected a point in R^3");
    double s = p.sum();
    return p - Vec::Constant(3, 0.3 * s);
}

double plane_angle(const Vec& n1, const Vec& n2) {
    require_same_dim(n1, n2, "plane_angle");
    return std::acos(std::clamp(n1.dot(n2), -1.0, 1.0));
}

double tour_cost(const Tour& t) {
    if (t.waypoints.empty()) throw GeometryError("tour_cost: empty tour");
    double c = 0.0;
    const std::size_t n = t.waypoints.size();
    for (std::size_t i = 0; i + 1 < n; ++i) c += dist(t.waypoints[i], t.waypoints[i + 1]);
    if (n > 1) c += dist(t.waypoints[n - 1], t.waypoints[0]);
    return c;
}

Vec resize_point(const Vec& p, int dim) {
    Vec out = Vec::Zero(dim);
    const int k = std::min<int>(dim, static_cast<int>(p.size()));
    out.head(k) = p.head(k);
    return out;
}

}  // namespace tspn

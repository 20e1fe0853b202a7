#include "tspn/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tspn {

namespace {

bool same_point(const Vec& a, const Vec& b) {
    double scale = std::max({1.0, a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>()});
    return (a - b).lpNorm<Eigen::Infinity>() <= 1e-12 * scale;
}

// Segments of the closed polyline, or the single waypoint as a degenerate one.
template <class F>
double min_over_segments(const Tour& t, F&& seg) {
    if (t.empty()) throw GeometryError("empty tour");
    const std::size_t n = t.size();
    if (n == 1) return seg(t.waypoints[0], t.waypoints[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, seg(t.waypoints[i], t.waypoints[(i + 1) % n]));
    return best;
}

}  // namespace

DiscreteInstance DiscreteInstance::from_groups(int dim, const std::vector<std::vector<Vec>>& groups) {
    DiscreteInstance out;
    out.dim = dim;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].empty()) throw std::invalid_argument("empty group " + std::to_string(i));
        std::vector<int> ids;
        for (const Vec& p : groups[i]) {
            if (p.size() != dim) throw GeometryError("wrong dimension in group " + std::to_string(i));
            if (!p.allFinite()) throw GeometryError("non-finite coordinate in group " + std::to_string(i));
            int found = -1;
            for (int q = 0; q < out.N(); ++q)
                if (same_point(out.points[q], p)) {
                    found = q;
                    break;
                }
            if (found < 0) {
                found = out.N();
                out.points.push_back(p);
                out.members.emplace_back();
            }
            if (std::find(ids.begin(), ids.end(), found) == ids.end()) {
                ids.push_back(found);
                out.members[found].push_back(static_cast<int>(i));
            }
        }
        out.group_points.push_back(std::move(ids));
    }
    return out;
}

std::vector<std::vector<Vec>> DiscreteInstance::groups() const {
    std::vector<std::vector<Vec>> g(n());
    for (int i = 0; i < n(); ++i)
        for (int p : group_points[i]) g[i].push_back(points[p]);
    return g;
}

DiscreteInstance discretize_lines(const LineInstance& inst, DiscretizeScheme scheme) {
    if (inst.n() < 2) throw std::invalid_argument("discretize_lines: need at least two lines");
    if (scheme != DiscretizeScheme::ClosestPairs) throw std::invalid_argument("unknown discretization scheme");
    const int n = inst.n();
    std::vector<std::vector<Vec>> groups(n);
    Vec centroid = Vec::Zero(inst.dim);
    int cnt = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Vec p = closest_point_between(inst.lines[i], inst.lines[j]);
            groups[i].push_back(p);
            centroid += p;
            ++cnt;
        }
    centroid /= cnt;
    for (int i = 0; i < n; ++i) groups[i].push_back(closest_point_on_line(centroid, inst.lines[i]));
    return DiscreteInstance::from_groups(inst.dim, groups);
}

FlatInstance lift_to_flats(const LineInstance& inst, int k, int d) {
    if (inst.dim != 3) throw std::invalid_argument("lift_to_flats: line instance must be 3-dimensional");
    if (k < 1 || d < k + 2) throw std::invalid_argument("lift_to_flats: need 1 <= k <= d - 2");
    FlatInstance out;
    out.dim = d;
    for (const Line& l : inst.lines) {
        Flat f;
        f.base = resize_point(l.base, d);
        f.basis.push_back(resize_point(l.dir, d));
        for (int extra = 0; extra < k - 1; ++extra) {
            Vec e = Vec::Zero(d);
            e[3 + extra] = 1.0;
            f.basis.push_back(e);
        }
        out.flats.push_back(std::move(f));
    }
    return out;
}

Tour project_tour(const Tour& t, int to_dim) {
    Tour out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.waypoints[i].size() < to_dim) throw GeometryError("project_tour: target dimension exceeds tour dimension");
        out.push(t.waypoints[i].head(to_dim), t.meta[i]);
    }
    return out;
}

double group_gap(const Tour& t, const DiscreteInstance& inst, int i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& w : t.waypoints)
        for (int p : inst.group_points[i]) best = std::min(best, dist(w, inst.points[p]));
    return best;
}

double line_gap(const Tour& t, const Line& l) {
    return min_over_segments(t, [&](const Vec& a, const Vec& b) { return dist_segment_line(a, b, l); });
}

double flat_gap(const Tour& t, const Flat& f) {
    return min_over_segments(t, [&](const Vec& a, const Vec& b) { return dist_segment_flat(a, b, f.base, f.basis); });
}

bool tour_feasible(const Tour& t, const DiscreteInstance& inst, double tol) {
    if (t.empty()) return false;
    for (int i = 0; i < inst.n(); ++i)
        if (group_gap(t, inst, i) > tol) return false;
    return true;
}

bool tour_feasible(const Tour& t, const LineInstance& inst, double tol) {
    if (t.empty()) return false;
    for (const Line& l : inst.lines)
        if (line_gap(t, l) > tol) return false;
    return true;
}

bool tour_feasible(const Tour& t, const FlatInstance& inst, double tol) {
    if (t.empty()) return false;
    for (const Flat& f : inst.flats)
        if (flat_gap(t, f) > tol) return false;
    return true;
}

}  // namespace tspn

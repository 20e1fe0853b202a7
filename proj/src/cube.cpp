#include "tspn/cube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Geometry>

namespace tspn {

namespace {

using V3 = Eigen::Vector3d;

constexpr int kTentSteps = 1092;  // delta-steps between consecutive vertex triangles

V3 v3(const Vec& v) { return V3(v[0], v[1], v[2]); }
Vec vec(const V3& v) { return Vec(v); }
V3 flat3(const V3& p) { return p - 0.3 * p.sum() * V3::Ones(); }

const std::array<V3, 3> kStart = {V3(0, 0, 1), V3(1, 0, 0), V3(0, 1, 0)};
const std::array<V3, 3> kEnd = {V3(1, 0, 1), V3(1, 1, 0), V3(0, 1, 1)};

// component of x orthogonal to the axis (1,1,1)
V3 radial(const V3& x) { return x - (x.sum() / 3.0) * V3::Ones(); }

struct Line3 {
    V3 b, d;
};

double dist3(const V3& p, const Line3& l) {
    V3 r = p - l.b;
    return (r - r.dot(l.d) * l.d).norm();
}

// Polyline walk: from poly[0], take steps of exact length `step` along the
// polyline; returns the visited points (without poly[0]), at most `steps`.
std::vector<V3> walk(const std::vector<V3>& poly, double step, int steps) {
    std::vector<V3> out;
    out.reserve(steps);
    V3 cur = poly[0];
    std::size_t k = 0;  // current segment [poly[k], poly[k+1]]
    double s0 = 0.0;
    const double s2 = step * step;
    while (static_cast<int>(out.size()) < steps) {
        bool found = false;
        for (; k + 1 < poly.size(); ++k, s0 = 0.0) {
            const V3& a = poly[k];
            const V3& b = poly[k + 1];
            if ((b - cur).squaredNorm() < s2) continue;
            // largest s in [s0,1] with |a + s(b-a) - cur| = step
            V3 e = b - a, f = a - cur;
            double A = e.squaredNorm(), B = 2 * e.dot(f), C = f.squaredNorm() - s2;
            double disc = std::max(0.0, B * B - 4 * A * C);
            double s = (-B + std::sqrt(disc)) / (2 * A);
            s = std::clamp(s, s0, 1.0);
            cur = a + s * e;
            s0 = s;
            out.push_back(cur);
            found = true;
            break;
        }
        if (!found) break;
    }
    return out;
}

// Closed curve piece from X to Y made of exactly `steps` segments of length
// `step`: the base polyline is lifted along the axis by h sin^2(pi tau) and h
// is found by bisection so that the last step lands on Y.
std::vector<V3> join(const std::vector<V3>& base, double step, int steps) {
    std::vector<double> arc(base.size(), 0.0);
    for (std::size_t i = 1; i < base.size(); ++i) arc[i] = arc[i - 1] + (base[i] - base[i - 1]).norm();
    if (arc.back() >= steps * step) throw std::logic_error("gen_cube: join budget shorter than its chord");
    const int M = std::max<int>(64, 2 * steps);
    std::vector<V3> dense;
    dense.reserve(M + 1);
    std::size_t seg = 0;
    for (int i = 0; i <= M; ++i) {
        double s = arc.back() * i / M;
        while (seg + 2 < base.size() && arc[seg + 1] < s) ++seg;
        double t = (s - arc[seg]) / std::max(1e-300, arc[seg + 1] - arc[seg]);
        dense.push_back(base[seg] + std::clamp(t, 0.0, 1.0) * (base[seg + 1] - base[seg]));
    }
    const V3 axis = V3::Ones().normalized();
    const V3 Y = base.back();
    std::vector<V3> curve(dense.size());
    auto lifted = [&](double h) {
        for (int i = 0; i <= M; ++i) {
            double sn = std::sin(M_PI * i / M);
            curve[i] = dense[i] + h * sn * sn * axis;
        }
        return walk(curve, step, steps - 1);
    };
    auto excess = [&](double h) {
        auto pts = lifted(h);
        if (static_cast<int>(pts.size()) < steps - 1) return -1.0;
        return (pts.back() - Y).norm() - step;
    };
    double lo = 0.0, hi = 0.1;
    while (excess(hi) < 0) {
        lo = hi;
        hi *= 2;
        if (hi > 1e3) throw std::logic_error("gen_cube: join bisection did not bracket");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) < 0 ? lo : hi) = mid;
    }
    return lifted(hi);
}

}  // namespace

TripartiteGraph TripartiteGraph::make(const std::vector<int>& classes, const std::vector<std::pair<int, int>>& edges) {
    std::array<int, 3> size{0, 0, 0};
    std::vector<int> slot(classes.size());
    for (std::size_t v = 0; v < classes.size(); ++v) {
        if (classes[v] < 0 || classes[v] > 2) throw std::invalid_argument("graph is not tripartite: bad class");
        slot[v] = size[classes[v]]++;
    }
    TripartiteGraph g;
    g.n = std::max({size[0], size[1], size[2]});
    if (g.n == 0) throw std::invalid_argument("tripartite graph with n = 0");
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= static_cast<int>(classes.size()) || b >= static_cast<int>(classes.size()))
            throw std::invalid_argument("edge endpoint out of range");
        if (classes[a] == classes[b])
            throw std::invalid_argument("graph is not tripartite: edge " + std::to_string(a) + "-" + std::to_string(b) +
                                        " inside class " + std::to_string(classes[a]));
        g.edges.emplace_back(g.id(classes[a], slot[a]), g.id(classes[b], slot[b]));
    }
    return g;
}

TripartiteGraph TripartiteGraph::complete(int n) {
    if (n <= 0) throw std::invalid_argument("tripartite graph with n = 0");
    TripartiteGraph g;
    g.n = n;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) g.edges.emplace_back(g.id(a, i), g.id(b, j));
    return g;
}

std::vector<Line> point_gadget(const Vec& q, int grid_side, double scale) {
    if (grid_side < 2) throw std::invalid_argument("point_gadget: grid_side < 2");
    if (q.size() != 3) throw GeometryError("point_gadget: q must be 3-dimensional");
    std::vector<Line> out;
    out.reserve(grid_side * grid_side);
    const double mid = (grid_side - 1) / 2.0;
    for (int i = 0; i < grid_side; ++i)
        for (int j = 0; j < grid_side; ++j) {
            Vec d(3);
            d << (i - mid) * scale, (j - mid) * scale, grid_side * scale;
            out.push_back(Line::from_direction(q, d));
        }
    return out;
}

std::vector<Line> CubeConstruction::gadget(int j) const { return point_gadget(Q.at(j), grid_side, grid_cell); }

LineInstance CubeConstruction::instance(bool with_gadgets) const {
    LineInstance inst;
    inst.dim = 3;
    inst.lines = lines_bar;
    if (with_gadgets)
        for (int j = 0; j < static_cast<int>(Q.size()); ++j)
            for (Line& l : gadget(j)) inst.lines.push_back(std::move(l));
    return inst;
}

CubeConstruction gen_cube(const TripartiteGraph& graph, int grid_side) {
    const int n = graph.n;
    if (n <= 0) throw std::invalid_argument("gen_cube: n = 0");
    if (grid_side < 4) throw std::invalid_argument("gen_cube: grid_side < 4");
    for (auto [a, b] : graph.edges) {
        if (a < 0 || b < 0 || a >= 3 * n || b >= 3 * n) throw std::invalid_argument("gen_cube: edge endpoint out of range");
        if (graph.cls(a) == graph.cls(b)) throw std::invalid_argument("gen_cube: graph is not tripartite");
    }

    CubeConstruction c;
    c.graph = graph;
    c.delta = 1.0 / (4000.0 * n);
    c.delta_star = std::sqrt(99.75) * c.delta;
    c.sigma = std::sqrt(0.7 * 0.7 + 0.3 * 0.3 + 0.3 * 0.3);
    c.cylinder_radius = c.sigma / 2;
    c.grid_side = grid_side;
    c.grid_cell = c.delta / (10.0 * grid_side);
    c.ball_radius = gadget_ball_radius(grid_side, c.grid_cell);

    c.P.resize(3 * n);
    c.Pbar.resize(3 * n);
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < n; ++i) {
            double frac = (n + i + 1) / (3.0 * n);
            V3 p = kStart[a] + frac * (kEnd[a] - kStart[a]);
            c.P[graph.id(a, i)] = vec(p);
            c.Pbar[graph.id(a, i)] = vec(flat3(p));
        }
    for (auto [a, b] : graph.edges) {
        c.lines.push_back(Line::through(c.P[a], c.P[b]));
        c.lines_bar.push_back(Line::through(c.Pbar[a], c.Pbar[b]));
    }

    std::vector<V3> corners;
    for (int m = 0; m < 8; ++m) corners.push_back(flat3(V3(m & 1, (m >> 1) & 1, (m >> 2) & 1)));

    for (int a = 0; a < 3; ++a) {
        V3 s = flat3(kStart[a]), t = flat3(kEnd[a]);
        c.edge_bar[a] = {vec(s), vec(t)};
        V3 u = (t - s).normalized();
        std::array<V3, 2> normal;
        int f = 0;
        for (int k = 0; k < 3; ++k) {
            if (kStart[a][k] != kEnd[a][k]) continue;
            // face keeping coordinate k fixed: contains the start with the other fixed coordinate flipped
            V3 other = kStart[a];
            for (int g = 0; g < 3; ++g)
                if (g != k && kStart[a][g] == kEnd[a][g]) other[g] = 1 - other[g];
            normal[f++] = u.cross(flat3(other) - s).normalized();
        }
        if (normal[0].dot(normal[1]) < 0) normal[1] = -normal[1];
        c.n1[a] = vec(normal[0]);
        c.n2[a] = vec(normal[1]);
        // the bisector leaving every cube corner strictly on one side
        V3 h;
        bool found = false;
        for (V3 cand : {V3(normal[0] + normal[1]), V3(normal[0] - normal[1])}) {
            cand.normalize();
            int pos = 0, neg = 0;
            for (const V3& x : corners) {
                double sd = cand.dot(x - s);
                if (sd > 1e-12) ++pos;
                if (sd < -1e-12) ++neg;
            }
            if (pos == 0 || neg == 0) {
                h = cand;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("gen_cube: no bisector plane avoids the cube");
        c.h_normal[a] = vec(h);
        V3 w = h.cross(u).normalized();
        if (w.dot(radial(0.5 * (s + t))) < 0) w = -w;
        c.u[a] = vec(u);
        c.w[a] = vec(w);
    }

    // Q^a: a straight delta-step at every vertex, tents in between
    const double D = c.sigma / (3.0 * n) - c.delta;
    const double hstep = D / kTentSteps;
    const double vstep = std::sqrt(c.delta * c.delta - hstep * hstep);
    std::array<std::vector<V3>, 3> qa;
    c.tri.assign(3 * n, -1);
    std::array<std::vector<int>, 3> tri_local;
    for (int a = 0; a < 3; ++a) {
        V3 s = v3(c.edge_bar[a].first), u = v3(c.u[a]), w = v3(c.w[a]);
        V3 off = s + c.delta_star * w;
        for (int i = 0; i < n; ++i) {
            double si = c.sigma * (n + i + 1) / (3.0 * n);
            tri_local[a].push_back(static_cast<int>(qa[a].size()));
            qa[a].push_back(off + (si - c.delta / 2) * u);
            qa[a].push_back(off + (si + c.delta / 2) * u);
            if (i + 1 == n) break;
            V3 start = qa[a].back();
            for (int k = 1; k < kTentSteps; ++k) {
                double up = std::min(k, kTentSteps - k) * vstep;
                qa[a].push_back(start + k * hstep * u + up * w);
            }
        }
    }

    const long long total = 40000LL * n;
    const long long inner = 3LL * (n + static_cast<long long>(kTentSteps) * (n - 1));
    const long long join_steps = total - inner;
    for (int a = 0; a < 3; ++a) {
        int b = (a + 1) % 3;
        c.Qa_range[a].first = static_cast<int>(c.Q.size());
        for (int v = 0; v < n; ++v) c.tri[graph.id(a, v)] = static_cast<int>(c.Q.size()) + tri_local[a][v];
        for (const V3& q : qa[a]) c.Q.push_back(vec(q));
        c.Qa_range[a].second = static_cast<int>(c.Q.size()) - 1;
        int steps = static_cast<int>(join_steps / 3 + (a < join_steps % 3 ? 1 : 0));
        std::vector<V3> base = {qa[a].back(), v3(c.edge_bar[a].second) + c.delta_star * v3(c.w[a]),
                                v3(c.edge_bar[b].first) + c.delta_star * v3(c.w[b]), qa[b].front()};
        for (const V3& q : join(base, c.delta, steps)) c.Q.push_back(vec(q));
    }
    return c;
}

Tour completeness_tour_cube(const CubeConstruction& c, const std::vector<int>& cover) {
    const auto& g = c.graph;
    std::vector<char> in(g.vertices(), 0);
    for (int v : cover) {
        if (v < 0 || v >= g.vertices()) throw std::invalid_argument("cover vertex " + std::to_string(v) + " out of range");
        in[v] = 1;
    }
    for (auto [a, b] : g.edges)
        if (!in[a] && !in[b])
            throw std::invalid_argument("not a vertex cover: edge " + std::to_string(a) + "-" + std::to_string(b) +
                                        " is uncovered");
    std::vector<int> detour_after(c.Q.size(), -1);
    for (int v = 0; v < g.vertices(); ++v)
        if (in[v]) detour_after[c.tri[v]] = v;
    Tour t;
    for (std::size_t j = 0; j < c.Q.size(); ++j) {
        t.push(c.Q[j], -1);
        if (detour_after[j] >= 0) t.push(c.Pbar[detour_after[j]], detour_after[j]);
    }
    return t;
}

bool cube_tour_feasible(const CubeConstruction& c, const Tour& t, double tol) {
    for (const Line& l : c.lines_bar)
        if (line_gap(t, l) > tol) return false;
    // gadget lines all pass through their q, so it suffices that q is a waypoint
    std::vector<V3> wp;
    for (const Vec& p : t.waypoints) wp.push_back(v3(p));
    std::size_t k = 0;
    for (const Vec& q : c.Q) {
        V3 qq = v3(q);
        bool hit = false;
        for (std::size_t s = 0; s < wp.size() && !hit; ++s, k = (k + 1) % wp.size())
            hit = (wp[k] - qq).norm() <= tol;
        if (!hit) return false;
    }
    return true;
}

std::vector<CheckResult> verify_cube(const CubeConstruction& c) {
    const auto& g = c.graph;
    const int n = g.n;
    std::vector<CheckResult> out;
    auto incident = [&](std::size_t i, std::size_t j) {
        auto [a, b] = g.edges[i];
        auto [x, y] = g.edges[j];
        return a == x || a == y || b == x || b == y;
    };
    auto pair_check = [&](const std::string& name, const std::vector<Line>& lines, double bound) {
        CheckResult r{name, true, std::numeric_limits<double>::infinity(), bound, ""};
        for (std::size_t i = 0; i < lines.size(); ++i)
            for (std::size_t j = i + 1; j < lines.size(); ++j) {
                if (incident(i, j)) continue;
                double d = dist_line_line(lines[i], lines[j]);
                if (d < r.worst) {
                    r.worst = d;
                    r.detail = "edges " + std::to_string(i) + "," + std::to_string(j);
                }
            }
        r.pass = !(r.worst < bound);
        if (std::isinf(r.worst)) r.detail = "no non-incident pairs";
        out.push_back(r);
    };
    pair_check("unflattened_line_distance", c.lines, 1.0 / (20.0 * n));
    pair_check("flattened_line_distance", c.lines_bar, 1.0 / (200.0 * n));

    {
        const double spacing = c.sigma / (3.0 * n);
        CheckResult r{"point_spacing", true, std::numeric_limits<double>::infinity(), spacing, ""};
        for (std::size_t i = 0; i < c.Pbar.size(); ++i)
            for (std::size_t j = i + 1; j < c.Pbar.size(); ++j) r.worst = std::min(r.worst, dist(c.Pbar[i], c.Pbar[j]));
        r.pass = r.worst >= spacing - 1e-9;
        if (n >= 2) {
            double adj = dist(c.Pbar[g.id(0, 0)], c.Pbar[g.id(0, 1)]);
            r.pass = r.pass && std::abs(r.worst - spacing) <= 1e-9 && std::abs(adj - spacing) <= 1e-9;
        } else {
            r.detail = "one point per edge: lower bound only";
        }
        out.push_back(r);
    }
    {
        const double expect = std::acos(0.33 / 0.34);
        CheckResult r{"plane_angle", true, 0.0, 0.25, ""};
        for (int a = 0; a < 3; ++a) {
            double ang = plane_angle(c.n1[a], c.n2[a]);
            ang = std::min(ang, M_PI - ang);
            r.worst = std::max(r.worst, ang);
            if (std::abs(ang - expect) > 1e-9 || !(ang < 0.25)) {
                r.pass = false;
                r.detail = "a=" + std::to_string(a + 1);
            }
        }
        out.push_back(r);
    }
    std::vector<V3> Q;
    Q.reserve(c.Q.size());
    for (const Vec& q : c.Q) Q.push_back(v3(q));
    {
        std::vector<Line3> L;
        for (const Line& l : c.lines_bar) L.push_back({v3(l.base), v3(l.dir)});
        CheckResult r{"q_line_distance", true, std::numeric_limits<double>::infinity(), 9.9 * c.delta, ""};
        for (std::size_t j = 0; j < Q.size(); ++j)
            for (std::size_t i = 0; i < L.size(); ++i) {
                double d = dist3(Q[j], L[i]);
                if (d < r.worst) {
                    r.worst = d;
                    r.detail = "q " + std::to_string(j) + ", edge " + std::to_string(g.edges[i].first) + "-" +
                               std::to_string(g.edges[i].second);
                }
            }
        r.pass = L.empty() || r.worst > r.bound;
        if (L.empty()) r.detail = "no lines";
        out.push_back(r);
    }
    {
        CheckResult r{"cylinder", true, std::numeric_limits<double>::infinity(), c.cylinder_radius, ""};
        for (std::size_t j = 0; j < Q.size(); ++j) {
            double d = radial(Q[j]).norm();
            if (d < r.worst) {
                r.worst = d;
                r.detail = "q " + std::to_string(j);
            }
        }
        r.pass = r.worst > r.bound;
        out.push_back(r);
    }
    {
        // consecutive steps exactly delta, other pairs at least delta, total 10
        CheckResult r{"q_spacing", true, 0.0, 1e-9, ""};
        double total = 0.0;
        for (std::size_t j = 0; j < Q.size(); ++j) {
            double d = (Q[(j + 1) % Q.size()] - Q[j]).norm();
            total += d;
            double err = std::abs(d - c.delta);
            if (err > r.worst) {
                r.worst = err;
                r.detail = "step " + std::to_string(j);
            }
        }
        r.pass = r.worst <= 1e-9 && std::abs(total - 10.0) <= 1e-6;
        const double cell = c.delta;
        std::unordered_map<std::uint64_t, std::vector<int>> grid;
        auto key = [&](long long x, long long y, long long z) {
            return (static_cast<std::uint64_t>(x & 0x1FFFFF) << 42) | (static_cast<std::uint64_t>(y & 0x1FFFFF) << 21) |
                   static_cast<std::uint64_t>(z & 0x1FFFFF);
        };
        auto coord = [&](double x) { return static_cast<long long>(std::floor(x / cell)); };
        for (std::size_t j = 0; j < Q.size(); ++j) grid[key(coord(Q[j][0]), coord(Q[j][1]), coord(Q[j][2]))].push_back(j);
        double min_other = std::numeric_limits<double>::infinity();
        const long long N = static_cast<long long>(Q.size());
        for (std::size_t j = 0; j < Q.size(); ++j) {
            long long x = coord(Q[j][0]), y = coord(Q[j][1]), z = coord(Q[j][2]);
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy)
                    for (long long dz = -1; dz <= 1; ++dz) {
                        auto it = grid.find(key(x + dx, y + dy, z + dz));
                        if (it == grid.end()) continue;
                        for (int k : it->second) {
                            long long gap = std::llabs(static_cast<long long>(j) - k);
                            if (gap == 0 || gap == 1 || gap == N - 1) continue;
                            min_other = std::min(min_other, (Q[j] - Q[k]).norm());
                        }
                    }
        }
        if (min_other < c.delta - 1e-12) {
            r.pass = false;
            r.detail = "non-consecutive pair closer than delta";
        }
        r.detail += (r.detail.empty() ? "" : "; ") + std::string("total ") + std::to_string(total);
        out.push_back(r);
    }
    {
        CheckResult r{"vertex_triangles", true, 0.0, 1e-9, ""};
        for (int v = 0; v < g.vertices(); ++v) {
            V3 p = v3(c.Pbar[v]);
            double e = std::max(std::abs((Q[c.tri[v]] - p).norm() - 10 * c.delta),
                                std::abs((Q[c.tri[v] + 1] - p).norm() - 10 * c.delta));
            if (e > r.worst) {
                r.worst = e;
                r.detail = "vertex " + std::to_string(v);
            }
        }
        r.pass = r.worst <= 1e-9;
        out.push_back(r);
    }
    {
        CheckResult r{"qa_size", true, 0.0, 4000.0 * n, ""};
        for (int a = 0; a < 3; ++a)
            r.worst = std::max<double>(r.worst, c.Qa_range[a].second - c.Qa_range[a].first + 1);
        r.pass = r.worst <= r.bound;
        out.push_back(r);
    }
    return out;
}

double gap_yes_value(int n) {
    double delta = 1.0 / (4000.0 * n);
    return 10.0 + 19.0 * delta * (n / 2.0);
}

double gap_no_value(int n) {
    double delta = 1.0 / (4000.0 * n);
    return 10.0 + 19.0 * delta * (34.0 / 33.0) * (n / 2.0) / 1.011;
}

std::pair<std::int64_t, std::int64_t> gadget_identity(int n) {
    std::int64_t n3 = static_cast<std::int64_t>(n) * n * n;
    std::int64_t num = (40 * n3) * (40 * n3);
    std::int64_t den = 80 * n3 * n3;
    std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

}  // namespace tspn

#include "tspn/highdim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace tspn {

namespace {

std::pair<double, double> extreme_distances(const std::vector<Vec>& pts) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double d = dist(pts[i], pts[j]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    return {lo, hi};
}

}  // namespace

int jl_dimension(double delta, int points) {
    return static_cast<int>(std::ceil(8.0 / (delta * delta) * std::log(std::max(points, 2))));
}

HighDimConstruction gen_highdim(const Graph& g, double eps, int alpha, std::uint64_t seed, int dim_override) {
    if (!(eps > 0.0 && eps <= 0.1)) throw std::invalid_argument("gen_highdim: eps must be in (0, 0.1]");
    if (alpha < 1) throw std::invalid_argument("gen_highdim: alpha < 1");
    if (g.n < 1) throw std::invalid_argument("gen_highdim: empty graph");

    HighDimConstruction c;
    c.source = g;
    c.alpha = alpha;
    c.eps = eps;
    c.delta = c.Delta = eps * eps;
    c.lambda = 1.0 - eps * eps;
    const int np = g.n * alpha;
    c.blown.n = np;
    for (auto [u, v] : g.edges)
        for (int i = 0; i < alpha; ++i)
            for (int j = 0; j < alpha; ++j) c.blown.edges.emplace_back(u * alpha + i, v * alpha + j);

    const int target = dim_override > 0 ? dim_override : jl_dimension(c.delta, np);
    c.exact_simplex = dim_override <= 0 && target >= np;
    if (c.exact_simplex) {
        c.dim = np;
        c.attempts = 1;
        for (int j = 0; j < np; ++j) {
            Vec p = Vec::Zero(np);
            p[j] = std::sqrt(0.5);
            c.points.push_back(p);
        }
    } else {
        c.dim = target;
        double best_ratio = std::numeric_limits<double>::infinity();
        bool ok = false;
        for (c.attempts = 1; c.attempts <= 200 && !ok; ++c.attempts) {
            std::mt19937_64 rng(seed + c.attempts - 1);
            std::normal_distribution<double> N(0.0, 1.0 / std::sqrt(static_cast<double>(target)));
            c.points.assign(np, Vec::Zero(target));
            // image of e_j / sqrt(2) is column j of the projection, scaled
            for (int j = 0; j < np; ++j)
                for (int k = 0; k < target; ++k) c.points[j][k] = N(rng) * std::sqrt(0.5);
            auto [lo, hi] = extreme_distances(c.points);
            if (np < 2 || lo <= 0) {
                ok = np < 2;
                continue;
            }
            best_ratio = std::min(best_ratio, hi / lo);
            ok = hi / lo * (1 + 1e-12) <= 1 + c.delta;
        }
        --c.attempts;
        if (!ok)
            throw EmbeddingFailed("gen_highdim: embedding failed after 200 attempts (best max/min distance " +
                                      std::to_string(best_ratio) + ")",
                                  best_ratio);
    }
    if (np >= 2) {
        double lo = extreme_distances(c.points).first;
        for (Vec& p : c.points) p *= (1 + 1e-12) / lo;
    }
    std::tie(c.min_dist, c.max_dist) = np >= 2 ? extreme_distances(c.points) : std::make_pair(0.0, 0.0);
    for (auto [u, v] : c.blown.edges) c.lines.push_back(Line::through(c.points[u], c.points[v]));
    return c;
}

Tour completeness_tour_highdim(const HighDimConstruction& c, const std::vector<int>& cover) {
    if (auto e = c.source.uncovered_edge(cover))
        throw std::invalid_argument("not a vertex cover: edge " + std::to_string(e->first) + "-" +
                                    std::to_string(e->second) + " is uncovered");
    Tour t;
    std::vector<int> sorted = cover;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v : sorted)
        for (int i = 0; i < c.alpha; ++i) t.push(c.points[c.copy(v, i)], c.copy(v, i));
    if (t.empty()) t.push(c.points[0], 0);
    return t;
}

ExtractedCover extract_vc_highdim(const HighDimConstruction& c, const Tour& t) {
    ExtractedCover r;
    const int np = c.blown.n;
    r.ball_nonempty.assign(np, 0);
    const std::size_t m = t.size();
    for (int v = 0; v < np; ++v)
        for (std::size_t i = 0; i < m && !r.ball_nonempty[v]; ++i)
            r.ball_nonempty[v] = segment_meets_ball(t.waypoints[i], t.waypoints[(i + 1) % m], c.points[v], c.Delta);
    for (int v = 0; v < c.source.n; ++v) {
        int hit = 0;
        for (int i = 0; i < c.alpha; ++i) hit += r.ball_nonempty[c.copy(v, i)];
        if (hit >= c.lambda * c.alpha) r.cover.push_back(v);
    }
    for (auto [u, v] : c.blown.edges)
        if (!r.ball_nonempty[u] && !r.ball_nonempty[v]) ++r.lines_uncovered_by_balls;
    return r;
}

double point_line_separation(const HighDimConstruction& c, int samples_per_line, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 2.0);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < c.lines.size(); ++e) {
        const Vec& a = c.points[c.blown.edges[e].first];
        const Vec& b = c.points[c.blown.edges[e].second];
        for (int s = 0; s < samples_per_line; ++s) {
            Vec p = a + U(rng) * (b - a);
            if (dist(p, a) <= c.Delta || dist(p, b) <= c.Delta) continue;
            for (std::size_t f = 0; f < c.lines.size(); ++f)
                if (f != e) worst = std::min(worst, dist_point_line(p, c.lines[f]) / (c.Delta / 2));
        }
    }
    return worst;
}

}  // namespace tspn

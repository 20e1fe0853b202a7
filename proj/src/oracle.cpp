#include "tspn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace tspn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

OracleResult held_karp_groups(const DiscreteInstance& inst, HeldKarpLimits limits) {
    const int n = inst.n();
    const int N = inst.N();
    if (n > limits.max_groups || N > limits.max_points)
        throw std::length_error("held_karp_groups: instance exceeds size cap (" + std::to_string(n) + " groups, " +
                                std::to_string(N) + " points)");
    if (n == 0) throw std::invalid_argument("held_karp_groups: no groups");
    const int full = (1 << n) - 1;
    std::vector<int> mask(N, 0);
    for (int p = 0; p < N; ++p)
        for (int g : inst.members[p]) mask[p] |= 1 << g;

    OracleResult res;
    res.method = "held-karp";
    for (int p = 0; p < N; ++p)
        if (mask[p] == full) {
            res.tour.push(inst.points[p], p);
            res.order = {p};
            return res;
        }

    int g0 = 0;
    for (int g = 1; g < n; ++g)
        if (inst.group_points[g].size() < inst.group_points[g0].size()) g0 = g;

    std::vector<std::vector<double>> D(N, std::vector<double>(N));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) D[a][b] = dist(inst.points[a], inst.points[b]);

    double best = kInf;
    std::vector<int> best_order;
    const std::size_t W = static_cast<std::size_t>(full) + 1;
    std::vector<double> dp(W * N);
    std::vector<int> par(W * N);
    for (int s : inst.group_points[g0]) {
        std::fill(dp.begin(), dp.end(), kInf);
        std::fill(par.begin(), par.end(), -1);
        dp[mask[s] * N + s] = 0.0;
        for (int M = 0; M <= full; ++M)
            for (int last = 0; last < N; ++last) {
                double cur = dp[M * N + last];
                if (cur == kInf) continue;
                for (int q = 0; q < N; ++q) {
                    if ((mask[q] & ~M) == 0) continue;
                    int M2 = M | mask[q];
                    double c = cur + D[last][q];
                    if (c < dp[M2 * N + q]) {
                        dp[M2 * N + q] = c;
                        par[M2 * N + q] = M * N + last;
                    }
                }
            }
        for (int last = 0; last < N; ++last) {
            double c = dp[full * N + last] + D[last][s];
            if (c < best) {
                best = c;
                best_order.clear();
                for (int at = full * N + last; at >= 0; at = par[at]) best_order.push_back(at % N);
                std::reverse(best_order.begin(), best_order.end());
            }
        }
    }
    if (best == kInf) throw std::logic_error("held_karp_groups: no tour found");
    res.cost = best;
    res.order = best_order;
    for (int p : best_order) res.tour.push(inst.points[p], p);
    return res;
}

OracleResult tour_fixed_line_order(const std::vector<Line>& lines, double tol, int max_iter) {
    const int n = static_cast<int>(lines.size());
    if (n < 2) throw std::invalid_argument("tour_fixed_line_order: need at least two lines");
    const int d = lines[0].dim();
    for (const Line& l : lines)
        if (l.dim() != d) throw GeometryError("tour_fixed_line_order: dimension mismatch");

    double scale = 1.0;
    for (const Line& l : lines) scale = std::max(scale, l.base.norm());

    Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
    auto point = [&](const Eigen::VectorXd& tt, int i) -> Vec { return lines[i].base + tt[i] * lines[i].dir; };
    auto smooth = [&](const Eigen::VectorXd& tt, double mu) {
        double f = 0.0;
        for (int i = 0; i < n; ++i) {
            Vec v = point(tt, (i + 1) % n) - point(tt, i);
            f += std::sqrt(v.squaredNorm() + mu * mu);
        }
        return f;
    };

    OracleResult res;
    res.method = "smoothed-newton";
    res.exact = false;
    int iters = 0;
    const double mu_final = std::max(1e-13, 1e-4 * tol) * scale;
    for (double mu = 1e-2 * scale;; mu = std::max(mu * 0.1, mu_final)) {
        double f = smooth(t, mu);
        res.history.push_back(f);
        for (int step = 0; step < 200; ++step) {
            if (++iters > max_iter) throw std::runtime_error("tour_fixed_line_order: iteration cap reached");
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                int j = (i + 1) % n;
                Vec v = point(t, j) - point(t, i);
                double s = std::sqrt(v.squaredNorm() + mu * mu);
                Vec u = v / s;
                const Vec& di = lines[i].dir;
                const Vec& dj = lines[j].dir;
                g[i] -= di.dot(u);
                g[j] += dj.dot(u);
                // Hessian of sqrt(|v|^2 + mu^2) in v is (I - u u^T) / s
                auto q = [&](const Vec& a, const Vec& b) { return (a.dot(b) - a.dot(u) * b.dot(u)) / s; };
                H(i, i) += q(di, di);
                H(j, j) += q(dj, dj);
                H(i, j) -= q(di, dj);
                H(j, i) -= q(di, dj);
            }
            if (g.norm() < 1e-14 * n) break;
            double lambda = 1e-12 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
            Eigen::VectorXd p;
            for (int tries = 0; tries < 60; ++tries) {
                Eigen::LDLT<Eigen::MatrixXd> ldlt(H + lambda * Eigen::MatrixXd::Identity(n, n));
                p = ldlt.solve(-g);
                if (ldlt.info() == Eigen::Success && p.allFinite() && g.dot(p) < 0) break;
                lambda *= 10;
            }
            double decrement = -g.dot(p);
            if (!(decrement > 0)) break;
            double a = 1.0;
            double fn = smooth(t + p, mu);
            while (fn > f - 1e-4 * a * decrement && a > 1e-12) {
                a *= 0.5;
                fn = smooth(t + a * p, mu);
            }
            if (fn >= f) break;
            t += a * p;
            f = fn;
            res.history.push_back(f);
            if (decrement < 1e-24 * scale * scale + 1e-3 * mu * mu / scale) break;
        }
        if (mu <= mu_final) break;
    }
    for (int i = 0; i < n; ++i) res.tour.push(point(t, i), i);
    res.cost = tour_cost(res.tour);
    res.order.resize(n);
    std::iota(res.order.begin(), res.order.end(), 0);
    return res;
}

OracleResult exact_line_tspn(const LineInstance& inst, int max_lines, double tol) {
    const int n = inst.n();
    if (n > max_lines) throw std::length_error("exact_line_tspn: more than " + std::to_string(max_lines) + " lines");
    if (n == 0) throw std::invalid_argument("exact_line_tspn: no lines");
    if (n == 1) {
        OracleResult r;
        r.method = "exact-line";
        r.tour.push(inst.lines[0].base, 0);
        r.order = {0};
        return r;
    }
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    OracleResult best;
    best.cost = kInf;
    do {
        if (n >= 3 && perm[1] > perm[n - 1]) continue;
        std::vector<Line> ordered;
        for (int i : perm) ordered.push_back(inst.lines[i]);
        OracleResult r = tour_fixed_line_order(ordered, tol);
        if (r.cost < best.cost) {
            best = std::move(r);
            best.order = perm;
            for (int i = 0; i < n; ++i) best.tour.meta[i] = perm[i];
        }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    best.method = "exact-line";
    return best;
}

}  // namespace tspn

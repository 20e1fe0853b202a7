#include "tspn/stgst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "tspn/simplex.hpp"

namespace tspn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<int>> node_groups(const DpGraph& h, const GroupFamily& groups) {
    std::vector<std::vector<int>> ng(h.size());
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (int v : groups[i]) {
            if (v < 0 || v >= h.size()) throw std::invalid_argument("group " + std::to_string(i) + " names a missing node");
            ng[v].push_back(static_cast<int>(i));
        }
    return ng;
}

// Min over solution trees of sum of edge costs plus per-node weights.
std::pair<SolutionTree, double> weighted_min_tree(const DpGraph& h, const std::vector<double>& weight) {
    std::vector<double> val(h.size(), kInf);
    std::vector<char> done(h.size(), 0);
    std::vector<int> choice(h.size(), -1);
    auto rec = [&](auto&& self, int v) -> double {
        if (done[v]) return val[v];
        const DpNode& n = h.nodes[v];
        double best;
        if (n.kind == NodeKind::Combination) {
            best = 0.0;
            for (int e = n.first; e < n.first + n.count; ++e) best += h.edges[e].cost + self(self, h.edges[e].to);
        } else if (n.count == 0) {
            best = 0.0;
        } else {
            best = kInf;
            for (int e = n.first; e < n.first + n.count; ++e) {
                double c = h.edges[e].cost + self(self, h.edges[e].to);
                if (c < best) {
                    best = c;
                    choice[v] = e;
                }
            }
        }
        done[v] = 1;
        return val[v] = best + weight[v];
    };
    double root = rec(rec, h.root);
    if (!std::isfinite(root)) return {SolutionTree{}, kInf};
    return {tree_from_choice(h, choice), root};
}

}  // namespace

std::vector<char> covered_groups(const SolutionTree& t, const GroupFamily& groups) {
    std::vector<char> cov(groups.size(), 0);
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (int v : groups[i])
            if (std::binary_search(t.nodes.begin(), t.nodes.end(), v)) {
                cov[i] = 1;
                break;
            }
    return cov;
}

FractionalSolution lp_relax(const DpGraph& h, const GroupFamily& groups, double tol) {
    const int ng = static_cast<int>(groups.size());
    const int m = 1 + ng;
    for (int i = 0; i < ng; ++i)
        if (groups[i].empty()) throw Infeasible("group " + std::to_string(i) + " is empty");
    auto member = node_groups(h, groups);
    double total = 0.0;
    for (const DpEdge& e : h.edges) total += std::abs(e.cost);
    const double big = 10.0 * (total + 1.0);
    const double rc_tol = 1e-9 * (1.0 + total);

    auto column_of = [&](const SolutionTree& t) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
        a[0] = 1.0;
        for (int v : t.nodes)
            for (int i : member[v]) a[1 + i] += 1.0;
        return a;
    };

    auto [t0, c0] = weighted_min_tree(h, std::vector<double>(h.size(), 0.0));
    if (!std::isfinite(c0)) throw Infeasible("DAG has no solution tree");

    ColumnLP lp(Eigen::VectorXd::Ones(m));
    std::vector<int> art(ng), surplus(ng);
    for (int i = 0; i < ng; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
        e[1 + i] = 1.0;
        art[i] = lp.add_column(e, big);
        surplus[i] = lp.add_column(-e, 0.0);
    }
    std::map<int, SolutionTree> tree_of;
    Eigen::VectorXd a0 = column_of(t0);
    int col0 = lp.add_column(a0, tree_cost(t0, h));
    tree_of[col0] = t0;
    std::vector<int> basis{col0};
    for (int i = 0; i < ng; ++i) basis.push_back(a0[1 + i] >= 1.0 ? surplus[i] : art[i]);
    lp.set_basis(basis);

    SolutionTree pending;
    auto pricer = [&](const Eigen::VectorXd& y) -> std::optional<ColumnLP::Column> {
        std::vector<double> w(h.size(), 0.0);
        for (int v = 0; v < h.size(); ++v)
            for (int i : member[v]) w[v] -= y[1 + i];
        auto [t, val] = weighted_min_tree(h, w);
        if (!std::isfinite(val) || val - y[0] >= -rc_tol) return std::nullopt;
        pending = t;
        return ColumnLP::Column{column_of(t), tree_cost(t, h)};
    };
    auto status = lp.solve(
        [&](const Eigen::VectorXd& y) {
            auto col = pricer(y);
            if (col) tree_of[lp.columns()] = pending;
            return col;
        },
        rc_tol);
    if (status != ColumnLP::Status::Optimal) throw std::runtime_error("lp_relax: simplex did not reach optimality");
    for (int i = 0; i < ng; ++i)
        if (lp.value(art[i]) > tol) throw Infeasible("group " + std::to_string(i) + " cannot be covered");

    FractionalSolution fs;
    fs.x.assign(h.edges.size(), 0.0);
    fs.node_value.assign(h.size(), 0.0);
    fs.iterations = lp.iterations();
    double mass = 0.0;
    for (const auto& [col, t] : tree_of) {
        if (col >= lp.columns()) continue;
        double w = lp.value(col);
        if (w <= 1e-12) continue;
        mass += w;
        fs.support.emplace_back(t, w);
    }
    for (auto& [t, w] : fs.support) {
        w /= mass;
        for (int e : t.edges) fs.x[e] += w;
        for (int v : t.nodes) fs.node_value[v] += w;
        fs.objective += w * tree_cost(t, h);
    }
    return fs;
}

SolutionTree round_once(const DpGraph& h, const FractionalSolution& x, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::vector<int> choice(h.size(), -1);
        std::vector<int> stack{h.root};
        bool ok = true;
        while (!stack.empty() && ok) {
            int v = stack.back();
            stack.pop_back();
            const DpNode& n = h.nodes[v];
            if (n.kind == NodeKind::Combination) {
                for (int e = n.first; e < n.first + n.count; ++e) stack.push_back(h.edges[e].to);
                continue;
            }
            if (n.count == 0) continue;
            double mass = 0.0;
            for (int e = n.first; e < n.first + n.count; ++e)
                if (x.x[e] >= 1e-12) mass += x.x[e];
            if (mass <= 0.0) {
                ok = false;
                break;
            }
            double u = U(rng) * mass;
            int pick = -1;
            for (int e = n.first; e < n.first + n.count; ++e) {
                if (x.x[e] < 1e-12) continue;
                pick = e;
                u -= x.x[e];
                if (u < 0.0) break;
            }
            choice[v] = pick;
            stack.push_back(h.edges[pick].to);
        }
        if (ok) return tree_from_choice(h, choice);
    }
    throw std::runtime_error("round_once: reached a subproblem node with zero fractional mass");
}

SolutionTree round_once(const DpGraph& h, const FractionalSolution& x, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return round_once(h, x, rng);
}

ExactResult exact_stgst(const DpGraph& h, const GroupFamily& groups, std::size_t budget) {
    const int ng = static_cast<int>(groups.size());
    if (ng > 20) throw BudgetExceeded("exact_stgst: too many groups");
    const int full = (1 << ng) - 1;
    const std::size_t width = static_cast<std::size_t>(full) + 1;
    auto member = node_groups(h, groups);
    std::vector<int> gm(h.size(), 0);
    for (int v = 0; v < h.size(); ++v)
        for (int i : member[v]) gm[v] |= 1 << i;

    ExactResult res;
    std::vector<std::vector<double>> f(h.size());
    std::vector<std::vector<std::vector<double>>> prefix(h.size());  // combination nodes

    auto rec = [&](auto&& self, int v) -> const std::vector<double>& {
        if (!f[v].empty()) return f[v];
        const DpNode& n = h.nodes[v];
        for (int e = n.first; e < n.first + n.count; ++e) self(self, h.edges[e].to);
        res.memo_entries += width;
        if (res.memo_entries > budget)
            throw BudgetExceeded("exact_stgst: memo budget of " + std::to_string(budget) + " entries exceeded");
        std::vector<double> out(width, kInf);
        if (n.kind == NodeKind::Subproblem) {
            if (n.count == 0) {
                for (int M = 0; M <= full; ++M)
                    if ((M & ~gm[v]) == 0) out[M] = 0.0;
            } else {
                for (int M = 0; M <= full; ++M) {
                    int rest = M & ~gm[v];
                    for (int e = n.first; e < n.first + n.count; ++e) {
                        double c = h.edges[e].cost + f[h.edges[e].to][rest];
                        if (c < out[M]) out[M] = c;
                    }
                }
            }
        } else {
            std::vector<double> acc(width, kInf);
            for (int M = 0; M <= full; ++M)
                if ((M & ~gm[v]) == 0) acc[M] = 0.0;
            auto& pre = prefix[v];
            pre.push_back(acc);
            for (int e = n.first; e < n.first + n.count; ++e) {
                const auto& fc = f[h.edges[e].to];
                std::vector<double> nxt(width, kInf);
                for (int M = 0; M <= full; ++M) {
                    // S ranges over subsets of M, ascending
                    for (int S = 0;; S = (S - M) & M) {
                        double c = acc[M & ~S] + h.edges[e].cost + fc[S];
                        if (c < nxt[M]) nxt[M] = c;
                        if (S == M) break;
                    }
                }
                acc = std::move(nxt);
                pre.push_back(acc);
            }
            out = acc;
        }
        f[v] = std::move(out);
        return f[v];
    };
    const auto& root = rec(rec, h.root);
    if (!std::isfinite(root[full])) throw Infeasible("exact_stgst: no solution tree covers every group");
    res.cost = root[full];

    std::vector<int> edges;
    std::vector<int> nodes;
    auto back = [&](auto&& self, int v, int M) -> void {
        nodes.push_back(v);
        const DpNode& n = h.nodes[v];
        if (n.count == 0) return;
        if (n.kind == NodeKind::Subproblem) {
            int rest = M & ~gm[v];
            for (int e = n.first; e < n.first + n.count; ++e) {
                if (h.edges[e].cost + f[h.edges[e].to][rest] == f[v][M]) {
                    edges.push_back(e);
                    self(self, h.edges[e].to, rest);
                    return;
                }
            }
            throw std::logic_error("exact_stgst: reconstruction failed");
        }
        const auto& pre = prefix[v];
        int cur = M;
        std::vector<std::pair<int, int>> parts;
        for (int t = n.count - 1; t >= 0; --t) {
            int e = n.first + t;
            const auto& fc = f[h.edges[e].to];
            bool found = false;
            for (int S = 0;; S = (S - cur) & cur) {
                if (pre[t][cur & ~S] + h.edges[e].cost + fc[S] == pre[t + 1][cur]) {
                    parts.emplace_back(e, S);
                    cur &= ~S;
                    found = true;
                    break;
                }
                if (S == cur) break;
            }
            if (!found) throw std::logic_error("exact_stgst: reconstruction failed");
        }
        std::reverse(parts.begin(), parts.end());
        for (auto [e, S] : parts) {
            edges.push_back(e);
            self(self, h.edges[e].to, S);
        }
    };
    back(back, h.root, full);
    std::sort(nodes.begin(), nodes.end());
    std::sort(edges.begin(), edges.end());
    res.tree = SolutionTree{nodes, edges};
    return res;
}

std::vector<SolutionTree> enumerate_solution_trees(const DpGraph& h, std::size_t cap) {
    std::vector<std::vector<std::vector<int>>> memo(h.size());
    std::vector<char> done(h.size(), 0);
    auto rec = [&](auto&& self, int v) -> const std::vector<std::vector<int>>& {
        if (done[v]) return memo[v];
        const DpNode& n = h.nodes[v];
        std::vector<std::vector<int>> out;
        if (n.count == 0) {
            out.push_back({});
        } else if (n.kind == NodeKind::Subproblem) {
            for (int e = n.first; e < n.first + n.count; ++e)
                for (const auto& t : self(self, h.edges[e].to)) {
                    out.push_back(t);
                    out.back().push_back(e);
                    if (out.size() > cap) throw BudgetExceeded("enumerate_solution_trees: cap exceeded");
                }
        } else {
            out.push_back({});
            for (int e = n.first; e < n.first + n.count; ++e) {
                const auto& sub = self(self, h.edges[e].to);
                std::vector<std::vector<int>> nxt;
                for (const auto& a : out)
                    for (const auto& b : sub) {
                        nxt.push_back(a);
                        nxt.back().insert(nxt.back().end(), b.begin(), b.end());
                        nxt.back().push_back(e);
                        if (nxt.size() > cap) throw BudgetExceeded("enumerate_solution_trees: cap exceeded");
                    }
                out = std::move(nxt);
            }
        }
        done[v] = 1;
        return memo[v] = std::move(out);
    };
    std::vector<SolutionTree> trees;
    for (const auto& es : rec(rec, h.root)) {
        SolutionTree t;
        t.edges = es;
        t.nodes.push_back(h.root);
        for (int e : es) t.nodes.push_back(h.edges[e].to);
        std::sort(t.nodes.begin(), t.nodes.end());
        std::sort(t.edges.begin(), t.edges.end());
        if (validate_solution_tree(t, h)) trees.push_back(std::move(t));
    }
    return trees;
}

int sample_count(double c, int groups, int nodes, int cap) {
    double l = std::ceil(c * std::log(std::max(groups, 1)) * std::log(std::max(nodes, 1)));
    return static_cast<int>(std::clamp(l, 1.0, static_cast<double>(std::max(cap, 1))));
}

RoundingReport solve_stgst(const DpGraph& h, const GroupFamily& groups, double c, std::uint64_t seed, int sample_cap) {
    FractionalSolution fs = lp_relax(h, groups);
    RoundingReport rep;
    rep.lp_objective = fs.objective;
    rep.samples = sample_count(c, static_cast<int>(groups.size()), h.size(), sample_cap);
    rep.coverage.assign(groups.size(), 0);
    double sum = 0.0;
    for (int s = 0; s < rep.samples; ++s) {
        SolutionTree t = round_once(h, fs, seed + static_cast<std::uint64_t>(s));
        double cost = tree_cost(t, h);
        auto cov = covered_groups(t, groups);
        for (std::size_t i = 0; i < cov.size(); ++i) rep.coverage[i] += cov[i];
        rep.costs.push_back(cost);
        rep.trees.push_back(std::move(t));
        sum += cost;
    }
    rep.mean_cost = sum / rep.samples;
    rep.uncovered.assign(groups.size(), 0);
    for (std::size_t i = 0; i < groups.size(); ++i) rep.uncovered[i] = rep.coverage[i] == 0;
    return rep;
}

}  // namespace tspn

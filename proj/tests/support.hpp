#pragma once
// Shared helpers for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "tspn/dp_graph.hpp"
#include "tspn/instance.hpp"
#include "tspn/stgst.hpp"

namespace tspn::testing {

/// Random AND-OR DAG shaped like a quadtree DP: a random tree of cells, a few
/// state nodes per cell, and combination nodes choosing one state per child
/// cell.  Node count stays at or below max_nodes (when the root cell alone fits).
inline DpGraph random_dag(std::mt19937_64& rng, int max_nodes) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto coin = [&](double p) { return U(rng) < p; };
    std::vector<NodeKind> kinds;
    std::vector<std::vector<std::pair<int, double>>> out;
    auto add = [&](NodeKind k) {
        kinds.push_back(k);
        out.emplace_back();
        return static_cast<int>(kinds.size()) - 1;
    };
    // returns the state nodes of a fresh cell at `depth`
    auto cell = [&](auto&& self, int depth) -> std::vector<int> {
        int states = 1 + static_cast<int>(rng() % 2);
        bool leaf = depth >= 3 || static_cast<int>(kinds.size()) + 8 > max_nodes || coin(0.3);
        std::vector<int> ids;
        for (int s = 0; s < states; ++s) ids.push_back(add(NodeKind::Subproblem));
        if (leaf) return ids;
        int nchild = 1 + static_cast<int>(rng() % 2);
        std::vector<std::vector<int>> child_states;
        for (int c = 0; c < nchild; ++c) {
            if (static_cast<int>(kinds.size()) + 4 > max_nodes) break;
            child_states.push_back(self(self, depth + 1));
        }
        if (child_states.empty()) return ids;
        for (int v : ids) {
            int combos = 1 + static_cast<int>(rng() % 2);
            for (int k = 0; k < combos && static_cast<int>(kinds.size()) < max_nodes; ++k) {
                int comb = add(NodeKind::Combination);
                out[v].push_back({comb, std::round(U(rng) * 100) / 10});
                for (const auto& cs : child_states) out[comb].push_back({cs[rng() % cs.size()], std::round(U(rng) * 50) / 10});
            }
        }
        return ids;
    };
    int root = cell(cell, 0)[0];
    // prune nodes unreachable from the root so the graph is small and clean
    std::vector<char> seen(kinds.size(), 0);
    std::vector<int> st{root};
    seen[root] = 1;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (auto [w, c] : out[v])
            if (!seen[w]) {
                seen[w] = 1;
                st.push_back(w);
            }
    }
    std::vector<int> remap(kinds.size(), -1);
    std::vector<NodeKind> k2;
    std::vector<std::vector<std::pair<int, double>>> o2;
    for (std::size_t v = 0; v < kinds.size(); ++v)
        if (seen[v]) {
            remap[v] = static_cast<int>(k2.size());
            k2.push_back(kinds[v]);
        }
    o2.resize(k2.size());
    for (std::size_t v = 0; v < kinds.size(); ++v)
        if (seen[v])
            for (auto [w, c] : out[v]) o2[remap[v]].push_back({remap[w], c});
    return DpGraph::from_adjacency(k2, o2, remap[root]);
}

/// Random groups over the leaves; one random solution tree hits every group,
/// so a covering tree always exists.
inline GroupFamily random_groups(const DpGraph& h, std::mt19937_64& rng, int ngroups) {
    std::vector<int> choice(h.size(), -1);
    for (int v = 0; v < h.size(); ++v)
        if (h.nodes[v].count > 0 && h.nodes[v].kind == NodeKind::Subproblem)
            choice[v] = h.nodes[v].first + static_cast<int>(rng() % h.nodes[v].count);
    SolutionTree t = tree_from_choice(h, choice);
    std::vector<int> leaves_in_tree, leaves;
    for (int v = 0; v < h.size(); ++v)
        if (h.is_leaf(v)) leaves.push_back(v);
    for (int v : t.nodes)
        if (h.is_leaf(v)) leaves_in_tree.push_back(v);
    GroupFamily g(ngroups);
    for (auto& grp : g) {
        grp.push_back(leaves_in_tree[rng() % leaves_in_tree.size()]);
        for (int v : leaves)
            if (rng() % 4 == 0) grp.push_back(v);
        std::sort(grp.begin(), grp.end());
        grp.erase(std::unique(grp.begin(), grp.end()), grp.end());
    }
    return g;
}

/// Minimum over all solution trees covering every group.
inline double brute_stgst(const DpGraph& h, const GroupFamily& g) {
    double best = std::numeric_limits<double>::infinity();
    for (const SolutionTree& t : enumerate_solution_trees(h)) {
        auto cov = covered_groups(t, g);
        if (std::all_of(cov.begin(), cov.end(), [](char c) { return c; })) best = std::min(best, tree_cost(t, h));
    }
    return best;
}

inline std::vector<Vec> random_points(std::mt19937_64& rng, int count, int dim, double box = 1.0) {
    std::uniform_real_distribution<double> U(0.0, box);
    std::vector<Vec> pts;
    for (int i = 0; i < count; ++i) {
        Vec p(dim);
        for (int k = 0; k < dim; ++k) p[k] = U(rng);
        pts.push_back(p);
    }
    return pts;
}

inline DiscreteInstance random_discrete(std::mt19937_64& rng, int n, int max_per_group, int dim, double box = 10.0) {
    std::vector<std::vector<Vec>> groups(n);
    for (auto& g : groups) g = random_points(rng, 1 + static_cast<int>(rng() % max_per_group), dim, box);
    return DiscreteInstance::from_groups(dim, groups);
}

inline LineInstance random_lines(std::mt19937_64& rng, int n, double box = 3.0) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    LineInstance L{3, {}};
    for (int i = 0; i < n; ++i) {
        Vec b(3), d(3);
        for (int k = 0; k < 3; ++k) {
            b[k] = U(rng) * box;
            d[k] = U(rng);
        }
        L.lines.push_back(Line::from_direction(b, d));
    }
    return L;
}

/// Plain TSP optimum by permutations (small inputs).
inline double brute_tsp(const std::vector<Vec>& p) {
    if (p.size() < 2) return 0.0;
    std::vector<int> o(p.size());
    std::iota(o.begin(), o.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0;
        for (std::size_t i = 0; i < o.size(); ++i) c += dist(p[o[i]], p[o[(i + 1) % o.size()]]);
        best = std::min(best, c);
    } while (std::next_permutation(o.begin() + 1, o.end()));
    return best;
}

/// Group TSP optimum by enumerating one point per group and every order.
inline double brute_group_tsp(const DiscreteInstance& inst) {
    const int n = inst.n();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(n, 0);
    while (true) {
        std::vector<Vec> pts;
        for (int i = 0; i < n; ++i) pts.push_back(inst.points[inst.group_points[i][pick[i]]]);
        best = std::min(best, brute_tsp(pts));
        int i = 0;
        while (i < n && ++pick[i] == static_cast<int>(inst.group_points[i].size())) pick[i++] = 0;
        if (i == n) break;
    }
    return best;
}

}  // namespace tspn::testing

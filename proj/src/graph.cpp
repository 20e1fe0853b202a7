#include "tspn/graph.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace tspn {

Graph Graph::complete(int n) {
    Graph g{n, {}};
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
    return g;
}

Graph Graph::petersen() {
    Graph g{10, {}};
    for (int i = 0; i < 5; ++i) {
        g.edges.emplace_back(i, (i + 1) % 5);
        g.edges.emplace_back(i, i + 5);
        g.edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

Graph Graph::cycle(int n) {
    Graph g{n, {}};
    for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n);
    return g;
}

std::optional<std::pair<int, int>> Graph::uncovered_edge(const std::vector<int>& cover) const {
    std::vector<char> in(n, 0);
    for (int v : cover) {
        if (v < 0 || v >= n) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
        in[v] = 1;
    }
    for (auto [u, v] : edges)
        if (!in[u] && !in[v]) return std::make_pair(u, v);
    return std::nullopt;
}

std::vector<int> min_vertex_cover(const Graph& g) {
    if (g.n > 24) throw std::length_error("min_vertex_cover: more than 24 vertices");
    unsigned best = (1u << g.n) - 1;
    for (unsigned s = 0; s < (1u << g.n); ++s) {
        if (std::popcount(s) >= std::popcount(best)) continue;
        bool ok = true;
        for (auto [u, v] : g.edges)
            if (!((s >> u) & 1) && !((s >> v) & 1)) {
                ok = false;
                break;
            }
        if (ok) best = s;
    }
    std::vector<int> cover;
    for (int v = 0; v < g.n; ++v)
        if ((best >> v) & 1) cover.push_back(v);
    return cover;
}

}  // namespace tspn

#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace tspn {

/// Simple undirected graph on vertices 0..n-1.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    static Graph complete(int n);
    static Graph petersen();
    static Graph cycle(int n);

    /// First edge with neither endpoint in `cover`.
    std::optional<std::pair<int, int>> uncovered_edge(const std::vector<int>& cover) const;
    bool is_vertex_cover(const std::vector<int>& cover) const { return !uncovered_edge(cover); }
};

/// Minimum vertex cover by exhaustive search (n <= 24).
std::vector<int> min_vertex_cover(const Graph& g);

}  // namespace tspn

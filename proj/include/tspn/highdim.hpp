#pragma once

#include <cstdint>
#include <vector>

#include "tspn/geometry.hpp"
#include "tspn/graph.hpp"
#include "tspn/instance.hpp"

namespace tspn {

struct HighDimConstruction {
    Graph source;
    int alpha = 1;
    Graph blown;  // copies (v, i) have id v * alpha + i
    double eps = 0.1;
    double delta = 0.0;   // distortion, eps^2
    double Delta = 0.0;   // ball radius, eps^2
    double lambda = 0.0;  // 1 - eps^2
    int dim = 0;
    bool exact_simplex = false;
    int attempts = 0;
    std::vector<Vec> points;  // per blown-up vertex
    std::vector<Line> lines;  // per blown-up edge
    double min_dist = 0.0;
    double max_dist = 0.0;

    LineInstance instance() const { return {dim, lines}; }
    int copy(int v, int i) const { return v * alpha + i; }
};

class EmbeddingFailed : public std::runtime_error {
public:
    double achieved;
    EmbeddingFailed(const std::string& what, double achieved) : std::runtime_error(what), achieved(achieved) {}
};

/// Default target dimension ceil(8 delta^-2 ln n').
int jl_dimension(double delta, int points);

/// `dim_override` > 0 forces a Gaussian projection to that dimension;
/// otherwise the projection is used only when the default dimension is
/// below the number of points, and the exact simplex otherwise.
HighDimConstruction gen_highdim(const Graph& g, double eps, int alpha, std::uint64_t seed, int dim_override = 0);

Tour completeness_tour_highdim(const HighDimConstruction& c, const std::vector<int>& cover);

struct ExtractedCover {
    std::vector<int> cover;            // source vertices
    std::vector<char> ball_nonempty;   // per blown-up vertex
    int lines_uncovered_by_balls = 0;  // no endpoint ball touched
};

ExtractedCover extract_vc_highdim(const HighDimConstruction& c, const Tour& t);

/// Smallest ratio dist(p, other line) / (Delta/2) over sampled points p on
/// each line outside both endpoint balls.
double point_line_separation(const HighDimConstruction& c, int samples_per_line, std::uint64_t seed);

}  // namespace tspn

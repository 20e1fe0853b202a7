#include <doctest.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "tspn/simplex.hpp"

using namespace tspn;

namespace {

using Adj = std::vector<std::vector<std::pair<int, double>>>;
constexpr NodeKind S = NodeKind::Subproblem;
constexpr NodeKind C = NodeKind::Combination;

// root -> comb -> {a, b}: exactly one solution tree, cost 4 + 7
DpGraph unique_tree() { return DpGraph::from_adjacency({S, C, S, S}, Adj{{{1, 0}}, {{2, 4}, {3, 7}}, {}, {}}, 0); }

// root picks one of two combinations, each leading to one leaf of cost 3 or 5
DpGraph two_choices() {
    return DpGraph::from_adjacency({S, C, C, S, S}, Adj{{{1, 0}, {2, 0}}, {{3, 3}}, {{4, 5}}, {}, {}}, 0);
}

// Probability of every tree under top-down sampling, by the product of choice
// probabilities x(e) / out-mass at each chosen subproblem edge.
std::map<std::vector<int>, double> exact_distribution(const DpGraph& h, const FractionalSolution& x,
                                                      std::vector<SolutionTree>& trees) {
    std::map<std::vector<int>, double> p;
    trees = enumerate_solution_trees(h);
    for (const SolutionTree& t : trees) {
        double prob = 1.0;
        for (int e : t.edges) {
            int v = h.edges[e].from;
            if (h.nodes[v].kind != NodeKind::Subproblem) continue;
            double mass = 0;
            for (int f = h.nodes[v].first; f < h.nodes[v].first + h.nodes[v].count; ++f) mass += x.x[f] > 1e-12 ? x.x[f] : 0;
            prob *= mass > 0 ? (x.x[e] > 1e-12 ? x.x[e] : 0) / mass : 0.0;
        }
        p[t.edges] = prob;
    }
    return p;
}

}  // namespace

TEST_SUITE("stgst") {
    TEST_CASE("simplex on a small LP") {
        // min -x0 - x1  s.t. x0 + x2 = 1, x1 + x3 = 2 (slacks x2, x3)
        Eigen::VectorXd b(2);
        b << 1, 2;
        ColumnLP lp(b);
        Eigen::VectorXd a(2);
        a << 1, 0;
        lp.add_column(a, -1);
        a << 0, 1;
        lp.add_column(a, -1);
        a << 1, 0;
        int s0 = lp.add_column(a, 0);
        a << 0, 1;
        int s1 = lp.add_column(a, 0);
        lp.set_basis({s0, s1});
        CHECK(lp.solve([](const Eigen::VectorXd&) { return std::nullopt; }) == ColumnLP::Status::Optimal);
        CHECK(lp.objective() == doctest::Approx(-3.0));
        CHECK(lp.value(0) == doctest::Approx(1.0));
        CHECK(lp.value(1) == doctest::Approx(2.0));
    }

    TEST_CASE("unique-tree DAG") {
        DpGraph h = unique_tree();
        GroupFamily g = {{2}, {3}};
        FractionalSolution x = lp_relax(h, g);
        CHECK(x.objective == doctest::Approx(11.0));
        for (double xe : x.x) CHECK(xe == doctest::Approx(1.0));
        ExactResult ex = exact_stgst(h, g);
        CHECK(ex.cost == 11.0);
        CHECK(ex.tree.nodes == std::vector<int>{0, 1, 2, 3});
        std::mt19937_64 rng(1);
        for (int i = 0; i < 20; ++i) CHECK(round_once(h, x, rng).nodes == ex.tree.nodes);
        RoundingReport rep = solve_stgst(h, g, 50.0, 3);
        for (char u : rep.uncovered) CHECK_FALSE(u);
        for (int c : rep.coverage) CHECK(c == rep.samples);
    }

    TEST_CASE("two root choices at costs 3 and 5") {
        DpGraph h = two_choices();
        GroupFamily g = {{3, 4}};
        CHECK(lp_relax(h, g).objective == doctest::Approx(3.0));
        CHECK(exact_stgst(h, g).cost == 3.0);
        // covered only by the cost-5 side
        CHECK(lp_relax(h, {{4}}).objective == doctest::Approx(5.0));
        CHECK(exact_stgst(h, {{4}}).cost == 5.0);
    }

    TEST_CASE("group covered only behind a cost-7 leaf edge") {
        DpGraph h = DpGraph::from_adjacency({S, C, S}, Adj{{{1, 0}}, {{2, 7}}, {}}, 0);
        CHECK(lp_relax(h, {{2}}).objective == doctest::Approx(7.0));
    }

    TEST_CASE("infeasible groups are named") {
        DpGraph h = two_choices();
        try {
            lp_relax(h, {{3}, {4}});
            FAIL("expected Infeasible");
        } catch (const Infeasible& e) {
            CHECK(std::string(e.what()).find("group") != std::string::npos);
        }
        CHECK_THROWS_AS(lp_relax(h, {{3}, {}}), Infeasible);
        CHECK_THROWS_AS(exact_stgst(h, {{3}, {4}}), Infeasible);
    }

    TEST_CASE("equal-mass choices split evenly") {
        DpGraph h = DpGraph::from_adjacency({S, C, C, S, S}, Adj{{{1, 0}, {2, 0}}, {{3, 1}}, {{4, 1}}, {}, {}}, 0);
        FractionalSolution x;
        x.x = {0.5, 0.5, 0.5, 0.5};
        x.objective = 1.0;
        const int N = 10000;
        int left = 0;
        std::mt19937_64 rng(12);
        for (int i = 0; i < N; ++i) left += round_once(h, x, rng).nodes[1] == 1;
        CHECK(std::abs(left - N / 2) <= 3 * std::sqrt(N * 0.25));
    }

    TEST_CASE("exact solver equals exhaustive enumeration; LP is a lower bound") {
        std::mt19937_64 rng(99);
        for (int t = 0; t < 30; ++t) {
            DpGraph h = testing::random_dag(rng, 30);
            GroupFamily g = testing::random_groups(h, rng, 1 + static_cast<int>(rng() % 3));
            double brute = testing::brute_stgst(h, g);
            ExactResult ex = exact_stgst(h, g, 100000);
            CHECK(ex.cost == doctest::Approx(brute));
            CHECK(validate_solution_tree(ex.tree, h));
            auto cov = covered_groups(ex.tree, g);
            CHECK(std::all_of(cov.begin(), cov.end(), [](char c) { return c; }));
            FractionalSolution x = lp_relax(h, g);
            CHECK(x.objective <= brute + 1e-7);
            for (int s = 0; s < 5; ++s) CHECK(validate_solution_tree(round_once(h, x, rng), h));
        }
    }

    TEST_CASE("fractional solution is a flow") {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 10; ++t) {
            DpGraph h = testing::random_dag(rng, 30);
            FractionalSolution x = lp_relax(h, testing::random_groups(h, rng, 2));
            if (h.is_leaf(h.root)) continue;
            double root_out = 0;
            for (const DpEdge& e : h.out(h.root)) root_out += x.x[&e - h.edges.data()];
            CHECK(root_out == doctest::Approx(1.0));
            for (int v = 0; v < h.size(); ++v)
                for (int f = h.nodes[v].first; f < h.nodes[v].first + h.nodes[v].count; ++f) {
                    CHECK(x.x[f] >= -1e-9);
                    CHECK(x.x[f] <= 1 + 1e-9);
                    if (h.nodes[v].kind == NodeKind::Combination) CHECK(x.x[f] == doctest::Approx(x.node_value[v]).epsilon(1e-7));
                }
        }
    }

    TEST_CASE("sampling distribution matches the product rule and the LP mean") {
        std::mt19937_64 rng(123);
        int tested = 0;
        while (tested < 3) {
            DpGraph h = testing::random_dag(rng, 20);
            GroupFamily g = testing::random_groups(h, rng, 3);
            FractionalSolution x = lp_relax(h, g);
            std::vector<SolutionTree> trees;
            auto dist = exact_distribution(h, x, trees);
            bool fractional = false;
            for (double xe : x.x) fractional |= xe > 1e-6 && xe < 1 - 1e-6;
            if (trees.size() < 2 || !fractional) continue;
            ++tested;
            double mean = 0, total = 0;
            for (const auto& t : trees) {
                mean += dist[t.edges] * tree_cost(t, h);
                total += dist[t.edges];
            }
            CHECK(total == doctest::Approx(1.0));
            CHECK(mean == doctest::Approx(x.objective).epsilon(1e-6));

            const int N = 10000;
            std::map<std::vector<int>, int> seen;
            for (int i = 0; i < N; ++i) ++seen[round_once(h, x, rng).edges];
            for (const auto& [edges, p] : dist) {
                double sd = std::sqrt(N * p * (1 - p));
                CHECK(std::abs(seen[edges] - N * p) <= 3 * sd + 1);
            }
        }
    }

    TEST_CASE("sample count") {
        CHECK(sample_count(4, 1, 100, 2000) == 1);
        CHECK(sample_count(4, 3, 100, 2000) == static_cast<int>(std::ceil(4 * std::log(3.0) * std::log(100.0))));
        CHECK(sample_count(1e9, 10, 10, 77) == 77);
    }

    TEST_CASE("exact solver budget") {
        std::mt19937_64 rng(5);
        DpGraph h = testing::random_dag(rng, 40);
        CHECK_THROWS_AS(exact_stgst(h, testing::random_groups(h, rng, 3), 1), BudgetExceeded);
    }
}

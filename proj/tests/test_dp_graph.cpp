#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "tspn/oracle.hpp"

using namespace tspn;

namespace {

Vec v(std::initializer_list<double> xs) {
    Vec p(xs.size());
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

struct Built {
    DiscreteInstance inst;
    PerturbedInstance pi;
    ShiftedQuadtree tree;
    DpGraph h;
};

Built build(const DiscreteInstance& inst, std::uint64_t seed, bool tsp_mode, int r = 2) {
    Built b{inst, {}, {}, {}};
    b.pi = perturb(inst, covering_context(inst));
    std::mt19937_64 rng(seed);
    b.tree = build_quadtree(b.pi, random_shift(b.pi, rng));
    DagOptions opt;
    opt.m = 1;
    opt.r = r;
    opt.tsp_mode = tsp_mode;
    b.h = build_dag(b.pi, b.tree, opt);
    return b;
}

// longest path in nodes, by DFS on the DAG
int dag_height(const DpGraph& h) {
    std::vector<int> memo(h.size(), -1);
    auto go = [&](auto&& self, int v) -> int {
        if (memo[v] >= 0) return memo[v];
        int best = 0;
        for (const DpEdge& e : h.out(v)) best = std::max(best, 1 + self(self, e.to));
        return memo[v] = best;
    };
    return go(go, h.root);
}

}  // namespace

TEST_SUITE("dp_graph") {
    TEST_CASE("hand-made DAG: validation rules") {
        // 0 -> {1, 2} (combinations), 1 -> {3, 4}, 2 -> {4}
        std::vector<NodeKind> k = {NodeKind::Subproblem, NodeKind::Combination, NodeKind::Combination,
                                   NodeKind::Subproblem, NodeKind::Subproblem};
        DpGraph h = DpGraph::from_adjacency(k, {{{1, 0}, {2, 0}}, {{3, 1}, {4, 2}}, {{4, 5}}, {}, {}}, 0);
        SolutionTree good{{0, 1, 3, 4}, {0, 2, 3}};
        CHECK(validate_solution_tree(good, h));
        CHECK(tree_cost(good, h) == 3.0);
        SolutionTree drop_child{{0, 1, 3}, {0, 2}};
        CHECK_FALSE(validate_solution_tree(drop_child, h));
        SolutionTree two_combos{{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}};
        CHECK_FALSE(validate_solution_tree(two_combos, h));
        SolutionTree no_root{{1, 3, 4}, {2, 3}};
        CHECK_FALSE(validate_solution_tree(no_root, h));
        CHECK(min_cost_tree(h).nodes == good.nodes);
        CHECK(enumerate_solution_trees(h).size() == 2);
    }

    TEST_CASE("one-point instance: leaf has visit true and false states") {
        auto b = build(DiscreteInstance::from_groups(2, {{v({1, 1})}}), 1, false);
        REQUIRE(b.pi.size() == 1);
        int point_leaf = b.tree.leaf_of(b.pi.pts[0].x);
        std::set<int> visits;
        for (int x = 0; x < b.h.size(); ++x)
            if (b.h.nodes[x].cell == point_leaf && b.h.nodes[x].kind == NodeKind::Subproblem) visits.insert(b.h.nodes[x].visit);
        CHECK(visits == std::set<int>{0, 1});
        CHECK(groups(b.h).size() == 1);
    }

    TEST_CASE("structure: acyclic, heights, leaf costs recomputed") {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 4; ++t) {
            auto b = build(testing::random_discrete(rng, 3, 2, 2), 100 + t, false);
            DagStats s = b.h.stats();
            CHECK(s.nodes == static_cast<std::size_t>(b.h.size()));
            CHECK(dag_height(b.h) <= 2 * b.tree.height + 1);
            const auto& layout = b.h.ctx->tmpl->states().layout();
            const double scale = b.pi.unit / layout.k;
            for (const DpEdge& e : b.h.edges) {
                CHECK(e.to != e.from);
                if (!b.h.is_leaf(e.to)) {
                    CHECK(e.cost == 0.0);
                    continue;
                }
                const DpNode& n = b.h.nodes[e.to];
                const Cell& c = b.tree.cells[n.cell];
                std::vector<std::pair<Vec, Vec>> paths;
                for (auto [p, q] : b.h.ctx->tmpl->states().state(n.state).pairs) {
                    IPoint a = portal_fine(c, layout, p), z = portal_fine(c, layout, q);
                    paths.emplace_back(v({double(a[0]), double(a[1])}), v({double(z[0]), double(z[1])}));
                }
                std::optional<Vec> pt;
                if (c.point >= 0) pt = v({double(b.pi.pts[c.point].x[0] * layout.k), double(b.pi.pts[c.point].x[1] * layout.k)});
                LeafSolution ls = solve_leaf(paths, pt, n.visit == 1, n.state == kStateClosed);
                CHECK(e.cost == doctest::Approx(ls.cost * scale).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("group sets") {
        auto b = build(DiscreteInstance::from_groups(2, {{v({0, 0}), v({4, 3})}, {v({4, 3})}, {v({9, 1})}}), 5, false);
        GroupFamily g = groups(b.h);
        REQUIRE(g.size() == 3);
        // the shared point makes group 1 a subset of group 0
        for (int x : g[1]) CHECK(std::count(g[0].begin(), g[0].end(), x) == 1);
        for (const auto& gi : g) {
            CHECK_FALSE(gi.empty());
            for (int x : gi) {
                CHECK(b.h.is_leaf(x));
                CHECK(b.h.nodes[x].visit == 1);
            }
        }
        // direct count: leaf states with visit bit 1 over cells holding group 2's point
        int cell = -1;
        for (int p = 0; p < b.pi.size(); ++p)
            if (b.pi.pts[p].groups == std::vector<int>{2}) cell = b.tree.leaf_of(b.pi.pts[p].x);
        int count = 0;
        for (int x = 0; x < b.h.size(); ++x)
            count += b.h.is_leaf(x) && b.h.nodes[x].cell == cell && b.h.nodes[x].visit == 1;
        CHECK(static_cast<int>(g[2].size()) == count);
    }

    TEST_CASE("dp_tsp: one point and two points") {
        auto one = dp_tsp_best(DiscreteInstance::from_groups(2, {{v({3, 3})}, {v({3, 3})}}), 1, 2, 1, 1);
        CHECK(one.cost == 0.0);
        auto pair = DiscreteInstance::from_groups(2, {{v({0, 0})}, {v({3, 4})}});
        auto two = dp_tsp_best(pair, 1, 2, 4, 1);
        CHECK(two.cost == doctest::Approx(10.0));
        CHECK(tour_feasible(two.tour, pair));
    }

    TEST_CASE("dp_tsp within twice the optimum on 7 random points") {
        std::mt19937_64 rng(77);
        for (int t = 0; t < 3; ++t) {
            auto pts = testing::random_points(rng, 7, 2, 10.0);
            std::vector<std::vector<Vec>> gs;
            for (const Vec& p : pts) gs.push_back({p});
            auto inst = DiscreteInstance::from_groups(2, gs);
            auto res = dp_tsp_best(inst, 1, 2, 16, 1000 + t);
            double opt = held_karp_groups(inst).cost;
            CHECK(tour_feasible(res.tour, inst));
            CHECK(res.cost >= opt - 1e-9);
            CHECK(res.cost <= 2.0 * opt);
        }
    }

    TEST_CASE("larger r never costs more on the same shift") {
        std::mt19937_64 rng(5);
        auto inst = testing::random_discrete(rng, 5, 1, 2);
        PerturbedInstance pi = perturb(inst, covering_context(inst));
        int compared = 0;
        for (int s = 0; s < 6; ++s) {
            ShiftedQuadtree t = build_quadtree(pi, random_shift(pi, rng));
            DagOptions opt;
            opt.tsp_mode = true;
            opt.r = 2;
            DpGraph h2 = build_dag(pi, t, opt);
            double c2 = tree_cost(min_cost_tree(h2), h2);
            opt.r = 1;
            try {
                DpGraph h1 = build_dag(pi, t, opt);
                double c1 = tree_cost(min_cost_tree(h1), h1);
                CHECK(c2 <= c1 + 1e-9);
                ++compared;
            } catch (const Infeasible&) {
                // r = 1 admits no closed tour on this shift
            }
        }
        CHECK(compared > 0);
    }

    TEST_CASE("shortcutting keeps the instance points") {
        Tour t;
        t.push(v({0, 0}), 3);
        t.push(v({1, 5}));
        t.push(v({2, 0}), 1);
        t.push(v({1, -5}));
        Tour s = shortcut_to_points(t);
        REQUIRE(s.size() == 2);
        CHECK(s.meta == std::vector<int>{3, 1});
        CHECK(tour_cost(s) <= tour_cost(t));
        Tour portals_only({v({0, 0}), v({1, 1})});
        CHECK(shortcut_to_points(portals_only).size() == 2);
    }

    TEST_CASE("tree and tour round trip") {
        std::mt19937_64 rng(31);
        for (int t = 0; t < 5; ++t) {
            auto b = build(testing::random_discrete(rng, 4, 2, 2), 200 + t, true);
            SolutionTree tree = min_cost_tree(b.h);
            REQUIRE(validate_solution_tree(tree, b.h));
            TreeTour f = tree_to_tour(tree, b.h);
            CHECK(f.cost == doctest::Approx(tree_cost(tree, b.h)).epsilon(1e-9));
            CHECK(tour_cost(f.tour) == doctest::Approx(f.cost).epsilon(1e-9));
            // every point is visited in TSP mode, and only the visit-bit leaves are
            std::set<int> vis(f.visited.begin(), f.visited.end());
            CHECK(static_cast<int>(vis.size()) == b.pi.size());
            SolutionTree back = tour_to_tree(f, b.h);
            CHECK(validate_solution_tree(back, b.h));
            CHECK(tree_cost(back, b.h) <= tree_cost(tree, b.h) + 1e-9);
        }
    }

    TEST_CASE("tour_to_tree rejects off-portal crossings") {
        std::mt19937_64 rng(41);
        auto b = build(testing::random_discrete(rng, 3, 1, 2), 7, true);
        TreeTour f = tree_to_tour(min_cost_tree(b.h), b.h);
        REQUIRE(f.fine.size() >= 2);
        // move a waypoint that sits on a portal off the portal grid
        bool moved = false;
        for (std::size_t i = 0; i < f.fine.size() && !moved; ++i)
            if (f.tour.meta[i] < 0) {
                f.fine[i][0] += 1;
                f.seg_leaf.assign(f.fine.size(), -1);
                moved = true;
            }
        REQUIRE(moved);
        CHECK_THROWS_AS(tour_to_tree(f, b.h), std::invalid_argument);
    }

    TEST_CASE("exhaustive minimum equals the DP on tiny DAGs") {
        std::mt19937_64 rng(3);
        auto b = build(testing::random_discrete(rng, 2, 1, 2), 9, true, 1);
        std::vector<SolutionTree> all = enumerate_solution_trees(b.h, 2000000);
        double best = 1e300;
        for (const auto& t : all) best = std::min(best, tree_cost(t, b.h));
        CHECK(tree_cost(min_cost_tree(b.h), b.h) == doctest::Approx(best));
    }

    TEST_CASE("node budget") {
        std::mt19937_64 rng(1);
        auto inst = testing::random_discrete(rng, 5, 2, 2);
        PerturbedInstance pi = perturb(inst, covering_context(inst));
        DagOptions opt;
        opt.node_budget = 10;
        CHECK_THROWS_AS(build_dag(pi, build_quadtree(pi, {0, 0, 0}), opt), BudgetExceeded);
    }
}

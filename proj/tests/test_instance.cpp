#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tspn/instance.hpp"
#include "tspn/oracle.hpp"

using namespace tspn;

namespace {

Vec v(std::initializer_list<double> xs) {
    Vec p(xs.size());
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

}  // namespace

TEST_SUITE("instance") {
    TEST_CASE("groups are deduplicated and memberships merged") {
        auto inst = DiscreteInstance::from_groups(2, {{v({0, 0}), v({1, 0})}, {v({1, 0})}, {v({1, 0}), v({1, 0})}});
        CHECK(inst.N() == 2);
        CHECK(inst.n() == 3);
        int shared = inst.group_points[1][0];
        CHECK(inst.members[shared].size() == 3);
        CHECK(inst.group_points[2].size() == 1);
        CHECK_THROWS(DiscreteInstance::from_groups(2, {{v({0, 0})}, {}}));
    }

    TEST_CASE("two skew lines: closest points, discrete optimum 2") {
        LineInstance L{3, {Line::from_direction(v({0, 0, 0}), v({1, 0, 0})), Line::from_direction(v({0, 0, 1}), v({0, 1, 0}))}};
        DiscreteInstance d = discretize_lines(L);
        CHECK(d.n() == 2);
        bool has0 = false, has1 = false;
        for (int p : d.group_points[0]) has0 |= (d.points[p] - v({0, 0, 0})).norm() < 1e-12;
        for (int p : d.group_points[1]) has1 |= (d.points[p] - v({0, 0, 1})).norm() < 1e-12;
        CHECK(has0);
        CHECK(has1);
        CHECK(held_karp_groups(d).cost == doctest::Approx(2.0));
    }

    TEST_CASE("intersecting lines share their intersection") {
        LineInstance L{3, {Line::from_direction(v({0, 0, 0}), v({1, 0, 0})), Line::from_direction(v({2, -1, 0}), v({0, 1, 0}))}};
        DiscreteInstance d = discretize_lines(L);
        bool shared = false;
        for (int p = 0; p < d.N(); ++p) shared |= d.members[p].size() == 2;
        CHECK(shared);
        CHECK(held_karp_groups(d).cost == doctest::Approx(0.0));
    }

    TEST_CASE("closest-pairs scheme: size bound and points on their lines") {
        std::mt19937_64 rng(2);
        for (int n : {2, 3, 5}) {
            LineInstance L = testing::random_lines(rng, n);
            DiscreteInstance d = discretize_lines(L);
            CHECK(d.N() <= n * (n - 1) + n);
            for (int i = 0; i < n; ++i)
                for (int p : d.group_points[i]) CHECK(dist_point_line(d.points[p], L.lines[i]) <= 1e-9);
        }
        CHECK_THROWS(discretize_lines(LineInstance{3, {Line::from_direction(v({0, 0, 0}), v({1, 0, 0}))}}));
    }

    TEST_CASE("lifting to flats") {
        LineInstance L{3, {Line::from_direction(v({0, 0, 0}), v({1, 0, 0})), Line::from_direction(v({0, 1, 1}), v({0, 1, 2}))}};
        FlatInstance same = lift_to_flats(L, 1, 3);
        CHECK(same.dim == 3);
        CHECK((same.flats[0].basis[0] - L.lines[0].dir).norm() < 1e-15);

        FlatInstance f = lift_to_flats(L, 2, 4);
        REQUIRE(f.flats[0].basis.size() == 2);
        CHECK((f.flats[0].basis[0] - v({1, 0, 0, 0})).norm() < 1e-15);
        CHECK((f.flats[0].basis[1] - v({0, 0, 0, 1})).norm() < 1e-15);
        CHECK_THROWS(lift_to_flats(L, 2, 3));

        std::mt19937_64 rng(4);
        LineInstance R = testing::random_lines(rng, 4);
        FlatInstance RF = lift_to_flats(R, 2, 4);
        OracleResult o = exact_line_tspn(R);
        Tour padded;
        for (const Vec& p : o.tour.waypoints) padded.push(resize_point(p, 4));
        CHECK(tour_feasible(padded, RF));
    }

    TEST_CASE("projecting tours never increases cost") {
        Tour sq({v({0, 0, 0}), v({1, 0, 0}), v({1, 1, 0}), v({0, 1, 0})});
        Tour same = project_tour(sq, 3);
        CHECK(tour_cost(same) == tour_cost(sq));
        Tour lifted;
        for (const Vec& p : sq.waypoints) lifted.push(v({p[0], p[1], p[2], 1.0}));
        CHECK(tour_cost(project_tour(lifted, 3)) == doctest::Approx(tour_cost(lifted)));

        std::mt19937_64 rng(8);
        Tour r(testing::random_points(rng, 7, 4));
        CHECK(tour_cost(project_tour(r, 3)) <= tour_cost(r) + 1e-12);
        CHECK_THROWS(project_tour(r, 5));
    }

    TEST_CASE("feasibility checks") {
        auto inst = DiscreteInstance::from_groups(2, {{v({0, 0})}, {v({5, 5}), v({1, 0})}});
        CHECK(tour_feasible(Tour({v({0, 0}), v({1, 0})}), inst));
        CHECK_FALSE(tour_feasible(Tour({v({0, 0}), v({2, 0})}), inst));
        CHECK(group_gap(Tour({v({0, 0}), v({2, 0})}), inst, 1) == doctest::Approx(1.0));
        LineInstance L{2, {Line::from_direction(v({0, 3}), v({1, 0}))}};
        CHECK(line_gap(Tour({v({0, 0}), v({0, 4})}), L.lines[0]) == doctest::Approx(0.0));
        CHECK_FALSE(tour_feasible(Tour({v({0, 0}), v({0, 2})}), L));
    }
}

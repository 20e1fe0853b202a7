#include <doctest.h>

#include <cmath>
#include <random>

#include "tspn/geometry.hpp"

using namespace tspn;

namespace {

Vec v(std::initializer_list<double> xs) {
    Vec p(xs.size());
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

// dense search over both parameters around the closest pair
double grid_line_distance(const Line& a, const Line& b) {
    double best = 1e300;
    for (int i = -400; i <= 400; ++i)
        for (int j = -400; j <= 400; ++j) best = std::min(best, dist(a.at(i * 0.025), b.at(j * 0.025)));
    return best;
}

}  // namespace

TEST_SUITE("geometry") {
    TEST_CASE("canonical lines compare equal regardless of defining points") {
        Line a = Line::through(v({1, 2, 3}), v({4, 6, 3}));
        Line b = Line::through(v({7, 10, 3}), v({-2, -2, 3}));
        CHECK((a.base - b.base).norm() < 1e-12);
        CHECK((a.dir - b.dir).norm() < 1e-12);
        CHECK(a.dir.norm() == doctest::Approx(1.0));
        CHECK(a.base.dot(a.dir) == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("degenerate direction is rejected") {
        CHECK_THROWS_AS(Line::through(v({1, 1}), v({1, 1})), GeometryError);
        CHECK_THROWS_AS(dist(v({0, 0}), v({0, 0, 0})), GeometryError);
    }

    TEST_CASE("skew lines: closed form, quadratic and grid search agree") {
        Line x = Line::from_direction(v({0, 0, 0}), v({1, 0, 0}));
        Line y = Line::from_direction(v({0, 0, 1}), v({0, 1, 0}));
        CHECK(dist_line_line(x, y) == doctest::Approx(1.0));
        CHECK(dist_line_line_cross(x, y) == doctest::Approx(1.0));

        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> U(-1, 1);
        for (int t = 0; t < 5; ++t) {
            Line a = Line::from_direction(v({U(rng), U(rng), U(rng)}), v({U(rng), U(rng), U(rng)}));
            Line b = Line::from_direction(v({U(rng), U(rng), U(rng)}), v({U(rng), U(rng), U(rng)}));
            double q = dist_line_line(a, b);
            CHECK(q == doctest::Approx(dist_line_line_cross(a, b)).epsilon(1e-9));
            double g = grid_line_distance(a, b);
            CHECK(q <= g + 1e-12);
            CHECK(g - q < 0.05);
            Vec p = closest_point_between(a, b);
            CHECK(dist_point_line(p, a) < 1e-9);
            CHECK(dist_point_line(p, b) == doctest::Approx(q).epsilon(1e-9));
        }
    }

    TEST_CASE("parallel and intersecting lines") {
        Line a = Line::from_direction(v({0, 0}), v({1, 0}));
        Line b = Line::from_direction(v({5, 1}), v({-2, 0}));
        CHECK(dist_line_line(a, b) == doctest::Approx(1.0));
        Line c = Line::from_direction(v({3, 3}), v({1, 1}));
        CHECK(dist_line_line(a, c) == doctest::Approx(0.0));
    }

    TEST_CASE("segment distances against sampling") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> U(-2, 2);
        for (int t = 0; t < 20; ++t) {
            Vec a = v({U(rng), U(rng), U(rng)}), b = v({U(rng), U(rng), U(rng)});
            Line l = Line::from_direction(v({U(rng), U(rng), U(rng)}), v({U(rng), U(rng), U(rng)}));
            Vec p = v({U(rng), U(rng), U(rng)});
            double sl = 1e300, sp = 1e300;
            for (int i = 0; i <= 4000; ++i) {
                Vec x = a + (b - a) * (i / 4000.0);
                sl = std::min(sl, dist_point_line(x, l));
                sp = std::min(sp, dist(x, p));
            }
            CHECK(dist_segment_line(a, b, l) <= sl + 1e-12);
            CHECK(sl - dist_segment_line(a, b, l) < 2e-3);
            CHECK(dist_point_segment(p, a, b) == doctest::Approx(sp).epsilon(1e-3));
        }
    }

    TEST_CASE("segment to flat") {
        std::vector<Vec> basis = {v({1, 0, 0, 0}), v({0, 0, 0, 1})};
        Vec base = v({0, 2, 0, 0});
        CHECK(dist_segment_flat(v({5, 2, 3, 7}), v({5, 2, -3, 1}), base, basis) == doctest::Approx(0.0));
        CHECK(dist_segment_flat(v({0, 0, 1, 0}), v({0, 0, 2, 0}), base, basis) == doctest::Approx(std::sqrt(5.0)));
    }

    TEST_CASE("segment meets ball") {
        const double D = 0.01;
        CHECK(segment_meets_ball(v({0, 0}), v({2, 0}), v({1, D / 2}), D));
        CHECK_FALSE(segment_meets_ball(v({0, 0}), v({2, 0}), v({1, 2 * D}), D));
        CHECK_FALSE(segment_meets_ball(v({0, 0}), v({2, 0}), v({3, 0}), D));
        CHECK(segment_meets_ball(v({0, 0}), v({0, 0}), v({0, D}), D));
    }

    TEST_CASE("flattening") {
        Vec one = flatten(v({1, 1, 1}));
        CHECK((one - v({0.1, 0.1, 0.1})).norm() < 1e-15);
        double sigma = (flatten(v({1, 0, 1})) - flatten(v({0, 0, 1}))).norm();
        CHECK(sigma == doctest::Approx(std::sqrt(0.67)).epsilon(1e-15));
        CHECK(sigma == doctest::Approx(0.818535).epsilon(1e-6));
        // lengths shrink by at most a factor 10
        Vec d = flatten(v({1, 1, 1})) - flatten(v({0, 0, 0}));
        CHECK(d.norm() == doctest::Approx(std::sqrt(3.0) / 10));
    }

    TEST_CASE("plane angle") {
        Vec n1 = v({0.3, 0.4, 0.3}) / std::sqrt(0.34), n2 = v({0.3, 0.3, 0.4}) / std::sqrt(0.34);
        CHECK(plane_angle(n1, n2) == doctest::Approx(std::acos(0.33 / 0.34)).epsilon(1e-12));
        CHECK(plane_angle(n1, n2) < 0.25);
    }

    TEST_CASE("tour cost") {
        Tour sq({v({0, 0}), v({1, 0}), v({1, 1}), v({0, 1})});
        CHECK(tour_cost(sq) == doctest::Approx(4.0));
        Tour single({v({3, 4})});
        CHECK(tour_cost(single) == 0.0);
        CHECK_THROWS_AS(tour_cost(Tour{}), GeometryError);
        CHECK(resize_point(v({1, 2}), 4).size() == 4);
    }
}

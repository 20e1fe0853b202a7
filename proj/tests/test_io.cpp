#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "tspn/io.hpp"

using namespace tspn;

namespace {

Vec v(std::initializer_list<double> xs) {
    Vec p(xs.size());
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

AnyInstance parse(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const FormatError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("line instance round trip") {
        LineInstance L{3, {Line::from_direction(v({0.1, 0.2, 0.3}), v({1, 2, 3})), Line::through(v({1, 0, 0}), v({0, 1, 0}))}};
        std::ostringstream out;
        write_instance(out, L);
        auto back = std::get<LineInstance>(parse(out.str()));
        REQUIRE(back.n() == 2);
        for (int i = 0; i < 2; ++i) {
            CHECK((back.lines[i].base - L.lines[i].base).norm() < 1e-15);
            CHECK((back.lines[i].dir - L.lines[i].dir).norm() < 1e-15);
        }
    }

    TEST_CASE("discrete and flat round trip") {
        auto D = DiscreteInstance::from_groups(2, {{v({0, 1.0 / 3})}, {v({2, 2}), v({0, 1.0 / 3})}});
        std::ostringstream out;
        write_instance(out, D);
        auto back = std::get<DiscreteInstance>(parse(out.str()));
        CHECK(back.N() == D.N());
        CHECK(back.groups() == D.groups());

        FlatInstance F{4, {Flat{v({0, 0, 0, 1}), {v({1, 0, 0, 0}), v({0, 0, 0, 1})}}}};
        std::ostringstream fo;
        write_instance(fo, F);
        auto fb = std::get<FlatInstance>(parse(fo.str()));
        CHECK(fb.flats.size() == 1);
        CHECK(fb.flats[0].basis.size() == 2);
    }

    TEST_CASE("comments and blank lines are ignored") {
        auto L = std::get<LineInstance>(parse("# c\nTSPN LINES 1\n\ndim 2  # two\nline 0 0 0 1 0\n"));
        CHECK(L.n() == 1);
    }

    TEST_CASE("format errors carry line numbers") {
        CHECK(error_of("TSPN DISCRETE 1\ndim 2\ngroup 0 0\n").find("empty group") != std::string::npos);
        CHECK(error_of("TSPN LINES 2\ndim 3\n").find("unsupported version") != std::string::npos);
        CHECK(error_of("TSPN LINES\n").find("line 1") != std::string::npos);
        CHECK(error_of("hello\n").find("malformed header") != std::string::npos);
        std::string e = error_of("TSPN LINES 1\ndim 3\nline 0 0 0 0 1 0\n");
        CHECK(e.find("line 3") != std::string::npos);
        CHECK(e.find("wrong dimension") != std::string::npos);
        e = error_of("TSPN LINES 1\ndim 2\nline 0 0 x 1 0\n");
        CHECK(e.find("non-numeric") != std::string::npos);
        CHECK(e.find("line 3") != std::string::npos);
        CHECK(error_of("TSPN LINES 1\ndim 2\nline 0 0 0 1 0\nline 0 1 1 1 0\n").find("duplicate id") != std::string::npos);
    }

    TEST_CASE("tour and sidecar round trip") {
        Tour t;
        t.push(v({1.0 / 3, 2}), 4);
        t.push(v({-1e-17, 5}));
        std::ostringstream out;
        write_tour(out, t);
        std::istringstream in(out.str());
        Tour back = parse_tour(in);
        REQUIRE(back.size() == 2);
        CHECK(back.waypoints[0] == t.waypoints[0]);
        CHECK(back.waypoints[1] == t.waypoints[1]);
        CHECK(back.meta == t.meta);

        std::string path = "io_sidecar_test.meta";
        write_sidecar(path, {{"cost", format_real(0.1)}, {"name", "x y"}});
        Sidecar kv = read_sidecar(path);
        std::remove(path.c_str());
        REQUIRE(kv.size() == 2);
        CHECK(std::stod(kv[0].second) == 0.1);
        CHECK(kv[1].second == "x y");
    }

    TEST_CASE("missing file") { CHECK_THROWS(read_instance("/nonexistent/instance.txt")); }
}

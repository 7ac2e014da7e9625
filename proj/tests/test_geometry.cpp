#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "mftd/errors.hpp"
#include "mftd/geometry.hpp"
#include "oracle_util.hpp"

using namespace mftd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double arc_length_oracle(const ParametricCurve& c) {
    return testing_oracles::adaptive_simpson([&](double s) { return norm(c.derivative(s)); }, c.a(), c.b(), 1e-13);
}

ParametricCurve segment() {
    return ParametricCurve("segment", 0.0, 1.0, [](double s) { return Vec2{s, 0.0}; });
}

}  // namespace

TEST_CASE("builtin curves at s = 0") {
    const Vec2 p1 = builtin_curve("sigma1")(0.0);
    CHECK(p1.x == -0.2);
    CHECK(p1.y == 0.5);
    const Vec2 p2 = builtin_curve("sigma2")(0.0);
    CHECK(p2.x == 0.2);
    CHECK(p2.y == -0.6);
    const Vec2 p3 = builtin_curve("sigma3")(0.0);
    CHECK(p3.x == 0.0);
    CHECK_THAT(p3.y, WithinAbs(0.1 * std::sin(2.1 * std::numbers::pi), 1e-15));
}

TEST_CASE("builtin curves follow their parametrizations") {
    const auto c1 = builtin_curve("sigma1");
    const auto c2 = builtin_curve("sigma2");
    const auto c3 = builtin_curve("sigma3");
    CHECK(c1.a() == -0.5);
    CHECK(c1.b() == 0.5);
    CHECK(c3.a() == -0.7);
    CHECK(c3.b() == 0.7);
    for (double s = -0.5; s <= 0.5; s += 0.05) {
        CHECK_THAT(c1(s).y, WithinAbs(-0.5 * s * s + 0.5, 1e-15));
        CHECK_THAT(c2(s).y, WithinAbs(s * s * s + s * s - 0.6, 1e-15));
        CHECK_THAT(c3(s).y, WithinAbs(0.5 * s * s + 0.1 * std::sin(3 * std::numbers::pi * (s + 0.7)), 1e-14));
    }
}

TEST_CASE("unknown builtin label is a configuration error") {
    CHECK_THROWS_AS(builtin_curve("sigma4"), ConfigError);
}

TEST_CASE("sigma1 arc length matches adaptive quadrature") {
    const auto c = builtin_curve("sigma1");
    const auto d = discretize(c, 200);
    const double ref = testing_oracles::adaptive_simpson([](double s) { return std::sqrt(1 + s * s); }, -0.5, 0.5,
                                                         1e-14);
    CHECK_THAT(d.total_length, WithinAbs(ref, 1e-8));
}

TEST_CASE("straight segment has unit length") {
    const auto d = discretize(segment(), 16);
    CHECK_THAT(d.total_length, WithinAbs(1.0, 1e-12));
    CHECK(d.size() == 16);
}

TEST_CASE("frames are orthonormal and normals are the rotated tangents") {
    for (const char* label : {"sigma1", "sigma2", "sigma3"}) {
        const auto d = discretize(builtin_curve(label), 200);
        for (std::size_t m = 0; m < d.size(); ++m) {
            CHECK_THAT(norm(d.tangents[m]), WithinAbs(1.0, 1e-12));
            CHECK_THAT(norm(d.normals[m]), WithinAbs(1.0, 1e-12));
            CHECK_THAT(dot(d.tangents[m], d.normals[m]), WithinAbs(0.0, 1e-12));
            CHECK(d.normals[m] == rotate90(d.tangents[m]));
        }
    }
}

TEST_CASE("weights sum to the adaptive arc length and refinement is stable") {
    for (const char* label : {"sigma1", "sigma2", "sigma3"}) {
        const auto c = builtin_curve(label);
        const auto d = discretize(c, 200);
        const auto d2 = discretize(c, 400);
        double sum = 0.0;
        for (double w : d.weights) sum += w;
        INFO(label);
        CHECK_THAT(sum, WithinRel(arc_length_oracle(c), 1e-8));
        CHECK_THAT(d2.total_length, WithinRel(d.total_length, 1e-8));
    }
}

TEST_CASE("builtin curves keep clearance from the boundary") {
    for (const char* label : {"sigma1", "sigma2", "sigma3"}) {
        const auto d = discretize(builtin_curve(label), 400);
        for (const auto& x : d.nodes) CHECK(norm(x) <= 0.9);
        CHECK_NOTHROW(check_clearance(d, 0.1));
    }
}

TEST_CASE("clearance violation and degenerate curves are rejected") {
    const ParametricCurve near_edge("edge", -0.5, 0.5, [](double s) { return Vec2{s, 0.95}; });
    CHECK_THROWS_AS(check_clearance(discretize(near_edge, 16), 0.1), GeometryError);
    const ParametricCurve frozen("frozen", 0.0, 1.0, [](double) { return Vec2{0.1, 0.1}; });
    CHECK_THROWS_AS(discretize(frozen, 16), GeometryError);
    CHECK_THROWS_AS(discretize(segment(), 4), GeometryError);
    const ParametricCurve loop("loop", 0.0, 4.0 * std::numbers::pi, [](double s) {
        return Vec2{0.3 * std::cos(s), 0.3 * std::sin(s)};
    });
    CHECK_THROWS_AS(discretize(loop, 16), GeometryError);
}

TEST_CASE("central-difference derivative for user curves") {
    const ParametricCurve c("user", -0.5, 0.5, [](double s) { return Vec2{s, s * s * s}; });
    const Vec2 d = c.derivative(0.3);
    CHECK_THAT(d.x, WithinAbs(1.0, 1e-8));
    CHECK_THAT(d.y, WithinAbs(3 * 0.09, 1e-8));
}

TEST_CASE("series components evaluate polynomials and sinusoids") {
    SeriesComponent c{{1.0, -2.0, 3.0}, {{0.5, 2.0, 0.25}}};
    const double s = 0.7;
    CHECK_THAT(c.value(s), WithinAbs(1.0 - 2.0 * s + 3.0 * s * s + 0.5 * std::sin(2.0 * s + 0.25), 1e-15));
    CHECK_THAT(c.derivative(s), WithinAbs(-2.0 + 6.0 * s + std::cos(2.0 * s + 0.25), 1e-15));
}

TEST_CASE("boundary grid formula") {
    const auto g = boundary_grid(4);
    REQUIRE(g.size() == 4);
    const Vec2 expected[] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};
    for (int i = 0; i < 4; ++i) {
        CHECK_THAT(g.points[i].x, WithinAbs(expected[i].x, 1e-15));
        CHECK_THAT(g.points[i].y, WithinAbs(expected[i].y, 1e-15));
    }
    const auto g128 = boundary_grid(128);
    CHECK(g128.size() == 128);
    CHECK_THAT(g128.weight, WithinRel(2 * std::numbers::pi / 128, 1e-15));
    for (std::size_t n = 0; n < g128.size(); ++n) {
        CHECK_THAT(norm(g128.points[n]), WithinAbs(1.0, 1e-14));
        CHECK(g128.normals[n] == g128.points[n]);
        const double th = 2 * std::numbers::pi * static_cast<double>(n + 1) / 128;
        CHECK_THAT(g128.points[n].x, WithinAbs(std::cos(th), 1e-15));
    }
    CHECK_THROWS_AS(boundary_grid(0), ConfigError);
}

TEST_CASE("distance to curve") {
    const auto c = builtin_curve("sigma1");
    const auto d = discretize(c, 200);
    CHECK_THAT(distance_to_curve(d.nodes[17], d), WithinAbs(0.0, 1e-15));

    // Dense sampling oracle.
    const Vec2 p{-0.2, 0.6};
    double best = 1e9;
    for (int i = 0; i <= 100000; ++i) {
        const double s = -0.5 + i * 1e-5;
        best = std::min(best, distance(p, c(s)));
    }
    CHECK_THAT(best, WithinAbs(0.1, 2e-3));
    CHECK_THAT(distance_to_curve(p, d), WithinAbs(best, 1e-5));

    const auto seg = discretize(segment(), 16);
    CHECK_THAT(distance_to_curve({0.37, 0.2}, seg), WithinAbs(distance_to_curve({0.37, -0.2}, seg), 1e-15));
    CHECK_THAT(distance_to_curve({0.37, 0.2}, seg), WithinAbs(0.2, 1e-15));
    CHECK_THAT(distance_to_curve({-1.0, 0.0}, seg), WithinAbs(1.0, 1e-15));
}

TEST_CASE("thin inclusion validation and tensor eigenvalues") {
    ThinInclusion inc{builtin_curve("sigma1")};
    CHECK_NOTHROW(inc.validate(0.2));
    CHECK(inc.tangent_eigenvalue() == Catch::Approx(2.0 * (0.2 - 1.0)));
    CHECK(inc.normal_eigenvalue() == Catch::Approx(2.0 * (1.0 - 5.0)));
    CHECK(inc.eps_contrast() == 4.0);
    inc.half_thickness = 0.2;
    CHECK_THROWS_AS(inc.validate(0.2), ConfigError);
    inc.half_thickness = 0.02;
    inc.mu = -1.0;
    CHECK_THROWS_AS(inc.validate(0.2), ConfigError);
}

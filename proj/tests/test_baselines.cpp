#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "map_util.hpp"
#include "mftd/baselines.hpp"
#include "mftd/errors.hpp"

using namespace mftd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const cdouble kI(0.0, 1.0);

Eigen::MatrixXcd monopole_msr(const IncidentSet& inc, const std::vector<Vec2>& pts) {
    const double w = inc.omegas[0];
    const int L = inc.L();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(L, L);
    for (int j = 0; j < L; ++j)
        for (int l = 0; l < L; ++l)
            for (const Vec2& p : pts) A(j, l) += std::exp(kI * w * dot(inc.directions[j] + inc.directions[l], p));
    return A;
}

}  // namespace

TEST_CASE("test vector: monopole weights and origin") {
    const auto inc = make_incident_set(16, 1, 0.2, 0.5);
    const double w = inc.omegas[0];
    const auto v = test_vector({0.3, -0.2}, w, inc.directions);
    for (Eigen::Index l = 0; l < v.size(); ++l) CHECK_THAT(std::abs(v[l]), WithinAbs(1.0, 1e-14));
    const auto one = test_vector({0.0, 0.0}, w, inc.directions);
    CHECK((one - Eigen::VectorXcd::Ones(16)).norm() == 0.0);

    const auto a = test_vector({0.3, 0.1}, w, inc.directions);
    const auto b = test_vector({-0.3, -0.1}, w, inc.directions);
    CHECK((a.conjugate() - b).norm() < 1e-13);
    CHECK(std::abs(a.dot(b)) < 16.0);

    TestVectorConfig dip{{0.0, 1.0, 0.0}};
    const auto d = test_vector({0.0, 0.0}, w, inc.directions, dip);
    for (int l = 0; l < 16; ++l) CHECK_THAT(d[l].real(), WithinAbs(inc.directions[l].x, 1e-15));

    CHECK_THROWS_AS(test_vector({0, 0}, w, inc.directions, TestVectorConfig{{0.0, 0.0, 0.0}}), ConfigError);
    CHECK_THROWS_AS(test_vector({0, 0}, w, {}), ConfigError);
}

TEST_CASE("signal space dimension") {
    const auto inc = make_incident_set(16, 1, 0.2, 0.5);
    const double w = inc.omegas[0];
    const auto three = decompose_msr(monopole_msr(inc, {{0.1, 0.2}, {-0.4, -0.1}, {0.3, -0.5}}), w);
    CHECK(signal_space_dim(three, 1e-6) == 3);
    CHECK(signal_space_dim(three, 1.0) == 1);
    const auto one = decompose_msr(monopole_msr(inc, {{0.2, 0.1}}), w);
    CHECK(signal_space_dim(one, 1e-6) == 1);

    const auto zero = decompose_msr(Eigen::MatrixXcd::Zero(16, 16), w);
    CHECK_THROWS_AS(signal_space_dim(zero, 1e-6), EmptySignalError);
    CHECK_THROWS_AS(signal_space_dim(three, 0.0), ConfigError);
    CHECK_THROWS_AS(signal_space_dim(three, 1.5), ConfigError);

    // full rank is capped so a noise subspace remains
    const auto full = decompose_msr(Eigen::MatrixXcd::Identity(16, 16), w);
    CHECK(signal_space_dim(full, 1e-6) == 15);
}

TEST_CASE("MUSIC: projector kernel saturates, orthogonal complement gives one") {
    const auto lat = Lattice::make(16, 0.95);
    const auto inc = make_incident_set(4, 1, 0.2, 0.5);
    const double w = inc.omegas[0];

    // signal space spanned by the test vector of the first lattice point
    const Vec2 p0 = lat->points[0];
    Eigen::VectorXcd u = test_vector(p0, w, inc.directions);
    u.normalize();
    const auto msr = decompose_msr(u * u.transpose(), w);
    MusicOptions opts;
    const auto g = music_map(lat, msr, inc.directions, 1, opts);
    CHECK(g.meta.saturated);
    CHECK(g.values[0] == opts.ceiling);
    for (double v : g.values) CHECK(v >= 1.0 - 1e-12);

    // signal space orthogonal to the test vector at the origin
    Eigen::VectorXcd wx = test_vector({0.0, 0.0}, w, inc.directions);  // all ones
    Eigen::VectorXcd orth(4);
    orth << 1.0, -1.0, 1.0, -1.0;
    orth /= 2.0;
    REQUIRE(std::abs(orth.dot(wx)) < 1e-15);
    const auto m2 = decompose_msr(orth * orth.transpose(), w);
    const auto centre = Lattice::make(3, 0.95);  // only the origin survives the clip
    const auto g2 = music_map(centre, m2, inc.directions, 1);
    for (std::size_t i = 0; i < centre->size(); ++i)
        if (norm(centre->points[i]) == 0.0) CHECK_THAT(g2.values[i], WithinAbs(1.0, 1e-12));
    CHECK_FALSE(g2.meta.saturated);

    CHECK_THROWS_AS(music_map(lat, msr, inc.directions, 4), EmptyNoiseSubspaceError);
    CHECK_THROWS_AS(music_map(lat, msr, inc.directions, 0), ConfigError);
}

TEST_CASE("MUSIC localizes three point scatterers") {
    const auto lat = Lattice::make(128, 0.95);
    const auto inc = make_incident_set(16, 1, 0.2, 0.5);
    const std::vector<Vec2> pts{{0.1, 0.2}, {-0.4, -0.1}, {0.3, -0.5}};
    const auto msr = decompose_msr(monopole_msr(inc, pts), inc.omegas[0]);
    const int M = signal_space_dim(msr, 1e-6);
    REQUIRE(M == 3);
    const auto g = music_map(lat, msr, inc.directions, M);
    for (double v : g.values) CHECK(v >= 1.0 - 1e-12);
    const auto peaks = testing::local_maxima(g);
    REQUIRE(peaks.size() >= 3);
    for (const Vec2& p : pts) {
        double best = 1e9;
        for (int i = 0; i < 3; ++i) best = std::min(best, testing::cells_between(*lat, lat->points[peaks[i]], p));
        CHECK(best <= 1.0);
    }
}

TEST_CASE("Kirchhoff: zero matrix, rank-one identity, refactoring invariance") {
    const auto lat = Lattice::make(32, 0.95);
    const auto inc = make_incident_set(16, 1, 0.2, 0.5);
    const double w = inc.omegas[0];

    const auto zero = kirchhoff_map(lat, decompose_msr(Eigen::MatrixXcd::Zero(16, 16), w), inc.directions);
    for (double v : zero.values) CHECK(v == 0.0);

    Eigen::VectorXcd u = Eigen::VectorXcd::Random(16), v = Eigen::VectorXcd::Random(16);
    u.normalize();
    v.normalize();
    const double s = 2.5;
    const MsrMatrix r1 = decompose_msr(s * u * v.adjoint(), w);  // s u conj(v)^T
    const auto g = kirchhoff_map(lat, r1, inc.directions);
    for (std::size_t i = 0; i < lat->size(); ++i) {
        Eigen::VectorXcd t = test_vector(lat->points[i], w, inc.directions);
        t.normalize();
        const Eigen::VectorXcd vbar = v.conjugate();
        const double expect = s * std::abs(u.dot(t)) * std::abs(vbar.dot(t));
        CHECK_THAT(g.values[i], WithinAbs(expect, 1e-12));
    }

    // same A with a different but valid singular system
    MsrMatrix alt = r1;
    alt.U = -alt.U;
    alt.V = cdouble(0.0, 1.0) * alt.V;
    const auto g2 = kirchhoff_map(lat, alt, inc.directions);
    CHECK(g2.values == g.values);
}

TEST_CASE("Kirchhoff localizes a single point scatterer; multi-frequency sums") {
    const auto lat = Lattice::make(128, 0.95);
    const auto inc = make_incident_set(16, 3, 0.3, 0.5);
    const Vec2 p{-0.25, 0.35};
    std::vector<MsrMatrix> msrs;
    for (int k = 0; k < inc.K(); ++k) {
        IncidentSet one = inc;
        one.omegas = {inc.omegas[k]};
        msrs.push_back(decompose_msr(monopole_msr(one, {p}), inc.omegas[k]));
    }
    const auto g = kirchhoff_map(lat, msrs[0], inc.directions);
    CHECK(testing::cells_between(*lat, lat->points[g.argmax()], p) <= 1.0);

    const auto mk = multi_kirchhoff_map(lat, msrs, inc.directions);
    CHECK(mk.meta.K == 3);
    CHECK(testing::cells_between(*lat, lat->points[mk.argmax()], p) <= 1.0);
    double acc = 0.0;
    for (const auto& m : msrs) acc += kirchhoff_map(lat, m, inc.directions).values[100];
    CHECK_THAT(mk.values[100], WithinRel(acc, 1e-14));
    CHECK_THROWS_AS(multi_kirchhoff_map(lat, {}, inc.directions), DomainError);
}

TEST_CASE("baseline maps do not depend on the worker count") {
    const auto lat = Lattice::make(48, 0.95);
    const auto inc = make_incident_set(16, 1, 0.2, 0.5);
    const auto msr = decompose_msr(monopole_msr(inc, {{0.1, 0.2}, {-0.4, -0.1}}), inc.omegas[0]);
    MusicOptions m1, m4;
    m1.workers = 1;
    m4.workers = 4;
    CHECK(music_map(lat, msr, inc.directions, 2, m1).values == music_map(lat, msr, inc.directions, 2, m4).values);
    KirchhoffOptions k1, k4;
    k1.workers = 1;
    k4.workers = 4;
    CHECK(kirchhoff_map(lat, msr, inc.directions, k1).values == kirchhoff_map(lat, msr, inc.directions, k4).values);
}

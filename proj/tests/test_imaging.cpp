#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mftd/errors.hpp"
#include "mftd/image_io.hpp"
#include "mftd/imaging.hpp"
#include "mftd/oracles.hpp"
#include "mftd/postprocess.hpp"
#include "mftd/specialfn.hpp"

using namespace mftd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

ThinInclusion inclusion(const std::string& label) { return ThinInclusion{builtin_curve(label)}; }

const BoundaryDataset& small_data() {
    static const BoundaryDataset d =
        synthesize({inclusion("sigma1")}, make_incident_set(4, 2, 0.2, 0.5), boundary_grid(128), 64);
    return d;
}

// Clean sigma1, L = 16, K = 16 on the default lattice; shared by the slower checks.
const MultiFrequencyMaps& clean_multi() {
    static const MultiFrequencyMaps m = [] {
        const auto data = synthesize({inclusion("sigma1")}, make_incident_set(16, 16, 0.2, 0.5), boundary_grid(128), 200);
        return etd_multi_components(Lattice::make(), data, all_frequencies(data));
    }();
    return m;
}

std::shared_ptr<const Lattice> points_lattice(const std::vector<Vec2>& pts) {
    auto lat = std::make_shared<Lattice>();
    lat->n = static_cast<int>(pts.size());
    lat->clip = 0.95;
    lat->spacing = 1e-3;  // sets the singularity cutoff of the infinite-band oracle
    lat->points = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        lat->col.push_back(static_cast<int>(i));
        lat->row.push_back(0);
    }
    return lat;
}

BoundaryDataset scaled(const BoundaryDataset& d, double a) {
    BoundaryDataset out = d;
    for (auto& t : out.traces) t *= a;
    return out;
}

}  // namespace

TEST_CASE("lattice layout and validation") {
    const auto lat = Lattice::make(128, 0.95);
    CHECK(lat->spacing == 2.0 / 127);
    for (std::size_t i = 0; i < lat->size(); ++i) CHECK(norm(lat->points[i]) <= 0.95);
    CHECK(lat->points.front().y < lat->points.back().y);
    CHECK_THROWS_AS(Lattice::make(1), ConfigError);
    CHECK_THROWS_AS(Lattice::make(64, 0.99), ConfigError);
}

TEST_CASE("adjoint field: zero data, linearity, domain") {
    const auto& d = small_data();
    const auto zero = BoundaryDataset::zeros(d.grid, d.incident);
    const auto a0 = adjoint_field({0.1, 0.2}, zero, 0, 0);
    CHECK(a0.value == cdouble(0.0));
    CHECK(a0.gradient.x == cdouble(0.0));
    CHECK(a0.gradient.y == cdouble(0.0));

    auto other = d;
    for (std::size_t i = 0; i < other.traces.size(); ++i) other.traces[i] = cdouble(std::sin(0.37 * i), std::cos(0.11 * i));
    auto sum = d;
    for (std::size_t i = 0; i < sum.traces.size(); ++i) sum.traces[i] += other.traces[i];
    for (const Vec2 z : {Vec2{0.1, 0.2}, Vec2{-0.5, 0.3}, Vec2{0.0, -0.9}}) {
        const auto s = adjoint_field(z, sum, 1, 1);
        const auto p = adjoint_field(z, d, 1, 1);
        const auto q = adjoint_field(z, other, 1, 1);
        CHECK(std::abs(s.value - (p.value + q.value)) <= 1e-12 * (1 + std::abs(s.value)));
        CHECK(std::abs(s.gradient.x - (p.gradient.x + q.gradient.x)) <= 1e-12 * (1 + std::abs(s.gradient.x)));
    }
    CHECK_THROWS_AS(adjoint_field({0.96, 0.0}, d, 0, 0), DomainError);
    const auto coarse = synthesize({inclusion("sigma1")}, make_incident_set(4, 1, 0.2, 0.5), boundary_grid(32), 64);
    CHECK_THROWS_AS(adjoint_field({0.0, 0.0}, coarse, 0, 0), ConfigError);
}

TEST_CASE("adjoint gradient matches central differences") {
    const auto& d = small_data();
    const double h = 1e-5;
    auto check_at = [&](const Vec2& z, std::size_t l, std::size_t k) {
        const auto a = adjoint_field(z, d, l, k);
        const cdouble fx = (adjoint_field(z + Vec2{h, 0}, d, l, k).value - adjoint_field(z - Vec2{h, 0}, d, l, k).value) / (2 * h);
        const cdouble fy = (adjoint_field(z + Vec2{0, h}, d, l, k).value - adjoint_field(z - Vec2{0, h}, d, l, k).value) / (2 * h);
        const double scale = std::hypot(std::abs(a.gradient.x), std::abs(a.gradient.y));
        CHECK(std::abs(a.gradient.x - fx) <= 1e-5 * scale);
        CHECK(std::abs(a.gradient.y - fy) <= 1e-5 * scale);
    };
    check_at({0.1, 0.2}, 0, 0);
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    int done = 0;
    while (done < 20) {
        const Vec2 z{u(rng), u(rng)};
        if (norm(z) > 0.9) continue;
        check_at(z, static_cast<std::size_t>(done % 4), static_cast<std::size_t>(done % 2));
        ++done;
    }
}

TEST_CASE("topological derivative components: zero data and scaling") {
    const auto lat = Lattice::make(24, 0.95);
    const auto& d = small_data();
    const auto zero = td_components(lat, BoundaryDataset::zeros(d.grid, d.incident), 0);
    for (double v : zero.eps.values) CHECK(v == 0.0);
    for (double v : zero.mu.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(etd_single(lat, BoundaryDataset::zeros(d.grid, d.incident), 0), FlatMapError);

    const auto base = td_components(lat, d, 0);
    const auto twice = td_components(lat, scaled(d, 2.5), 0);
    for (std::size_t i = 0; i < lat->size(); ++i) {
        CHECK_THAT(twice.eps.values[i], WithinAbs(2.5 * base.eps.values[i], 1e-12 * (1 + std::abs(base.eps.values[i]))));
        CHECK_THAT(twice.mu.values[i], WithinAbs(2.5 * base.mu.values[i], 1e-12 * (1 + std::abs(base.mu.values[i]))));
    }
    CHECK(td_eps_map(lat, d, 1).values == td_components(lat, d, 1).eps.values);
    CHECK(td_mu_map(lat, d, 1).values == td_components(lat, d, 1).mu.values);
}

TEST_CASE("normalized functional: unit maxima, bound, sign, worker independence") {
    const auto lat = Lattice::make(24, 0.95);
    const auto& d = small_data();
    const auto c = td_components(lat, d, 0);
    CHECK(normalize_max_abs(c.eps).max_abs() == 1.0);
    CHECK(normalize_max_abs(c.mu).max_abs() == 1.0);

    const auto e = etd_single(lat, d, 0);
    for (double v : e.values) CHECK(std::abs(v) <= 1.0);
    const auto pos = etd_single(lat, scaled(d, 3.0), 0);
    const auto neg = etd_single(lat, scaled(d, -0.5), 0);
    for (std::size_t i = 0; i < lat->size(); ++i) {
        CHECK_THAT(pos.values[i], WithinAbs(e.values[i], 1e-14));
        CHECK_THAT(neg.values[i], WithinAbs(-e.values[i], 1e-14));
    }

    ImagingOptions w1, w3;
    w1.workers = 1;
    w3.workers = 3;
    CHECK(etd_single(lat, d, 1, w1).values == etd_single(lat, d, 1, w3).values);
}

TEST_CASE("multi-frequency functional: K = 1 is bitwise single, bound") {
    const auto lat = Lattice::make(24, 0.95);
    const auto& d = small_data();
    CHECK(etd_multi(lat, d, {1}).values == etd_single(lat, d, 1).values);
    const auto m = etd_multi(lat, d, all_frequencies(d));
    for (double v : m.values) CHECK(std::abs(v) <= 1.0);
    CHECK(m.meta.K == 2);
    CHECK(m.meta.functional == "etd_multi");
    CHECK_THROWS_AS(etd_multi(lat, d, {}), DomainError);
}

TEST_CASE("clean multi-frequency map localizes the curve") {
    const auto& m = clean_multi();
    const auto disc = discretize(builtin_curve("sigma1"), 400);
    CHECK(localization_metric(m.combined, {disc}) <= 0.1);
}

TEST_CASE("sidelobe minima on both sides of the curve midpoint") {
    const auto& m = clean_multi().combined;
    const Lattice& lat = *m.lattice;
    // column closest to x = -0.2, the midpoint's abscissa; the normal there is vertical
    const int col = static_cast<int>(std::lround((-0.2 + 1.0) / lat.spacing));
    std::vector<std::pair<double, double>> line;  // (y, value), increasing y
    for (std::size_t i = 0; i < lat.size(); ++i)
        if (lat.col[i] == col) line.emplace_back(lat.points[i].y, m.values[i]);
    const double xc = -1.0 + col * lat.spacing;
    const double yc = builtin_curve("sigma1")(xc + 0.2).y;  // x(s) = s - 0.2
    bool below = false, above = false;
    for (std::size_t j = 1; j + 1 < line.size(); ++j) {
        const auto [y, v] = line[j];
        if (!(v < line[j - 1].second && v < line[j + 1].second && v < 0.0)) continue;
        if (y < yc && yc - y <= 0.15) below = true;
        if (y > yc && y - yc <= 0.15) above = true;
    }
    CHECK(below);
    CHECK(above);
}

TEST_CASE("band kernel oracle: degenerate band, coincidence, Fig 2 kernel") {
    const auto lat = Lattice::make(16, 0.95);
    const auto inc = make_incident_set(4, 3, 0.2, 0.5);
    CHECK_THROWS_AS(oracle_E1_E2(lat, {inclusion("sigma1")}, inc, 1, 1), DegenerateBandError);
    CHECK_THROWS_AS(oracle_E3_E4(lat, {inclusion("sigma1")}, inc, 5.0, 5.0), DegenerateBandError);
    CHECK(spherical_j0(0.0) * std::cos(0.0) == 1.0);
    double best = -1e9, at = 1e9;
    for (int i = -20000; i <= 20000; ++i) {
        const double x = i * 5e-4;
        const double y = spherical_j0(2 * x) * std::cos(10 * x);
        if (y > best) best = y, at = x;
    }
    CHECK(best == 1.0);
    CHECK(at == 0.0);
}

TEST_CASE("direction sum approaches the Bessel kernel for 64 directions") {
    const auto inc = make_incident_set(64, 1, 0.2, 0.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi), rad(0.05, 8.0);
    for (int t = 0; t < 200; ++t) {
        const double r = rad(rng), phi = ang(rng);
        const Vec2 v{r * std::cos(phi), r * std::sin(phi)};
        cdouble sum = 0.0;
        for (const auto& d : inc.directions) sum += std::exp(cdouble(0, 1) * dot(d, v));
        const double j0 = bessel_j(0, r);
        if (std::abs(j0) < 1e-3) continue;
        // the plain sum is L J0; the 2 pi J0 form is the (2 pi / L)-weighted sum
        CHECK(std::abs(2 * kPi / 64.0 * sum - 2 * kPi * j0) <= 0.02 * std::abs(2 * kPi * j0));
    }
}

TEST_CASE("Lambda band oracle: small-curve limit") {
    // a short straight segment centred on a lattice point
    const auto lat = Lattice::make(16, 0.95);
    const Vec2 z = lat->points[lat->size() / 2];
    const double len = 1e-4;
    ThinInclusion tiny{ParametricCurve("tiny", -len / 2, len / 2, [z](double s) { return z + Vec2{s, 0.0}; },
                                       [](double) { return Vec2{1.0, 0.0}; })};
    const auto inc = make_incident_set(16, 16, 0.2, 0.5);
    const double w1 = inc.omegas.front(), wk = inc.omegas.back();
    const auto e3 = oracle_E3_E4(lat, {tiny}, inc, w1, wk, OracleOptions{16, 0}).first;
    const double expect = 2 * kPi * (tiny.eps - tiny.eps0) * len * (wk - w1);
    CHECK_THAT(e3.values[lat->size() / 2], WithinRel(expect, 1e-3));
}

TEST_CASE("infinite-band oracle: far bound and decay along a ray") {
    const auto inc = make_incident_set(16, 1, 0.2, 0.5);
    const auto sig = inclusion("sigma1");
    const auto disc = discretize(sig.curve, 200);
    const double bound = 2 * kPi * (sig.eps - sig.eps0) * disc.total_length;

    const auto lat = Lattice::make(64, 0.95);
    const auto e5 = oracle_E5_E6(lat, {sig}, inc).first;
    int far = 0;
    for (std::size_t i = 0; i < lat->size(); ++i) {
        if (distance_to_curve(lat->points[i], disc) < 1.0) continue;
        ++far;
        CHECK(e5.values[i] <= bound);
    }
    CHECK(far > 0);

    // from the midpoint (-0.2, 0.5) straight down along the normal
    std::vector<Vec2> ray;
    for (int j = 1; j <= 10; ++j) ray.push_back({-0.2, 0.5 - 0.05 * j});
    const auto r = oracle_E5_E6(points_lattice(ray), {sig}, inc).first;
    for (std::size_t j = 1; j < ray.size(); ++j) CHECK(r.values[j] < r.values[j - 1]);
}

TEST_CASE("correlation helper") {
    const auto lat = Lattice::make(16, 0.95);
    ImageGrid a{lat, std::vector<double>(lat->size()), {}}, b = a;
    for (std::size_t i = 0; i < lat->size(); ++i) {
        a.values[i] = lat->points[i].x;
        b.values[i] = 3 * lat->points[i].x + 1;
    }
    CHECK_THAT(correlation(a, b), WithinAbs(1.0, 1e-12));
    ImageGrid flat{lat, std::vector<double>(lat->size(), 2.0), {}};
    CHECK(std::isnan(correlation(a, flat)));
}

TEST_CASE("grid export: CSV round trip and PGM header") {
    const auto lat = Lattice::make(20, 0.95);
    ImageGrid g{lat, std::vector<double>(lat->size()), {}};
    g.meta.functional = "etd_multi";
    for (std::size_t i = 0; i < lat->size(); ++i) g.values[i] = std::sin(7.1 * i) / 3.0;
    std::stringstream csv;
    write_csv(csv, g);
    const auto back = read_csv(csv, lat);
    CHECK(back.values == g.values);

    std::stringstream bad("x,y,value\n0.5,0.5,1\n");
    CHECK_THROWS_AS(read_csv(bad, lat), FormatError);

    std::ostringstream pgm;
    write_pgm(pgm, g);
    const std::string s = pgm.str();
    CHECK(s.rfind("P5\n# etd_multi min=", 0) == 0);
    const auto header_end = s.find("255\n") + 4;
    CHECK(s.size() - header_end == 400u);
    // the point with the largest value renders white, in the row flipped to the top
    const std::size_t k = g.argmax();
    const int top_row = 19 - lat->row[k];
    CHECK(static_cast<unsigned char>(s[header_end + top_row * 20 + lat->col[k]]) == 255);
}

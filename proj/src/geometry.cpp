#include "mftd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mftd/errors.hpp"
#include "quadrature.hpp"

namespace mftd {

double SeriesComponent::value(double s) const {
    double acc = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * s + *it;
    for (const auto& w : sines) acc += w.amp * std::sin(w.freq * s + w.phase);
    return acc;
}

double SeriesComponent::derivative(double s) const {
    double acc = 0.0;
    for (std::size_t i = poly.size(); i-- > 1;) acc = acc * s + static_cast<double>(i) * poly[i];
    for (const auto& w : sines) acc += w.amp * w.freq * std::cos(w.freq * s + w.phase);
    return acc;
}

ParametricCurve::ParametricCurve(std::string label, double a, double b, Map position, Map derivative)
    : label_(std::move(label)), a_(a), b_(b), position_(std::move(position)),
      derivative_(std::move(derivative)) {
    if (!(b_ > a_)) throw GeometryError("curve '" + label_ + "': parameter range must satisfy a < b");
    if (!position_) throw GeometryError("curve '" + label_ + "': missing position map");
}

ParametricCurve ParametricCurve::from_series(std::string label, double a, double b, SeriesComponent x,
                                             SeriesComponent y) {
    auto pos = [x, y](double s) { return Vec2{x.value(s), y.value(s)}; };
    auto der = [x, y](double s) { return Vec2{x.derivative(s), y.derivative(s)}; };
    return ParametricCurve(std::move(label), a, b, pos, der);
}

Vec2 ParametricCurve::derivative(double s) const {
    if (derivative_) return derivative_(s);
    constexpr double step = 1e-6;
    // Dividing by the representable spacing keeps affine maps exact.
    const double sp = s + step;
    const double sm = s - step;
    return (1.0 / (sp - sm)) * (position_(sp) - position_(sm));
}

ParametricCurve builtin_curve(const std::string& label) {
    using S = SeriesComponent;
    constexpr double pi = std::numbers::pi;
    if (label == "sigma1") {
        return ParametricCurve::from_series(label, -0.5, 0.5, S{{-0.2, 1.0}, {}}, S{{0.5, 0.0, -0.5}, {}});
    }
    if (label == "sigma2") {
        return ParametricCurve::from_series(label, -0.5, 0.5, S{{0.2, 1.0}, {}},
                                            S{{-0.6, 0.0, 1.0, 1.0}, {}});
    }
    if (label == "sigma3") {
        // 0.1 sin(3 pi (s + 0.7)) = 0.1 sin(3 pi s + 2.1 pi)
        return ParametricCurve::from_series(label, -0.7, 0.7, S{{0.0, 1.0}, {}},
                                            S{{0.0, 0.0, 0.5}, {{0.1, 3.0 * pi, 2.1 * pi}}});
    }
    throw ConfigError("unknown builtin curve '" + label + "'");
}

CurveDiscretization discretize(const ParametricCurve& curve, int m_nodes) {
    if (m_nodes < 8) throw GeometryError("discretize: m_nodes must be >= 8");
    const int panels = (m_nodes + 3) / 4;
    const double width = (curve.b() - curve.a()) / panels;

    CurveDiscretization d;
    const std::size_t total = static_cast<std::size_t>(panels) * detail::kGL4Nodes.size();
    d.params.reserve(total);
    d.nodes.reserve(total);
    d.weights.reserve(total);
    d.tangents.reserve(total);
    d.normals.reserve(total);

    for (int p = 0; p < panels; ++p) {
        const double mid = curve.a() + (p + 0.5) * width;
        for (std::size_t i = 0; i < detail::kGL4Nodes.size(); ++i) {
            const double s = mid + 0.5 * width * detail::kGL4Nodes[i];
            const Vec2 ds = curve.derivative(s);
            const double speed = norm(ds);
            if (!(speed >= 1e-12))
                throw GeometryError("curve '" + curve.label() + "': degenerate derivative at s=" +
                                    std::to_string(s));
            const Vec2 t = (1.0 / speed) * ds;
            d.params.push_back(s);
            d.nodes.push_back(curve(s));
            d.weights.push_back(0.5 * width * detail::kGL4Weights[i] * speed);
            d.tangents.push_back(t);
            d.normals.push_back(rotate90(t));
        }
    }
    d.start = curve(curve.a());
    d.end = curve(curve.b());
    for (double w : d.weights) d.total_length += w;

    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        for (std::size_t j = i + 2; j < d.nodes.size(); ++j) {
            if (distance(d.nodes[i], d.nodes[j]) <= 1e-12)
                throw GeometryError("curve '" + curve.label() + "' is not simple on its parameter range");
        }
    }
    return d;
}

void check_clearance(const CurveDiscretization& disc, double clearance) {
    for (const auto& x : disc.nodes) {
        if (norm(x) > 1.0 - clearance)
            throw GeometryError("curve node (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                                ") violates boundary clearance " + std::to_string(clearance));
    }
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

}  // namespace

double distance_to_curve(const Vec2& p, const CurveDiscretization& disc) {
    if (disc.nodes.empty()) return distance(p, disc.start);
    double best = point_segment_distance(p, disc.start, disc.nodes.front());
    for (std::size_t i = 0; i + 1 < disc.nodes.size(); ++i)
        best = std::min(best, point_segment_distance(p, disc.nodes[i], disc.nodes[i + 1]));
    best = std::min(best, point_segment_distance(p, disc.nodes.back(), disc.end));
    return best;
}

void ThinInclusion::validate(double lambda_min) const {
    if (!(eps > 0 && mu > 0 && eps0 > 0 && mu0 > 0))
        throw ConfigError("inclusion '" + curve.label() + "': permittivities and permeabilities must be > 0");
    if (!(half_thickness > 0))
        throw ConfigError("inclusion '" + curve.label() + "': half-thickness must be > 0");
    if (half_thickness > lambda_min / 10.0)
        throw ConfigError("inclusion '" + curve.label() + "': half-thickness " +
                          std::to_string(half_thickness) + " exceeds lambda_min/10 = " +
                          std::to_string(lambda_min / 10.0));
}

BoundaryGrid boundary_grid(int n_points) {
    if (n_points < 1) throw ConfigError("boundary grid needs at least one point");
    BoundaryGrid g;
    g.points.reserve(n_points);
    for (int n = 1; n <= n_points; ++n) {
        const double th = 2.0 * std::numbers::pi * n / n_points;
        g.points.push_back({std::cos(th), std::sin(th)});
    }
    g.normals = g.points;
    g.weight = 2.0 * std::numbers::pi / n_points;
    return g;
}

}  // namespace mftd

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mftd/vec2.hpp"

namespace mftd {

// One coordinate of a curve as sum_i poly[i] s^i + sum_j amp_j sin(freq_j s + phase_j).
// Covers the builtin curves and the user curves accepted by the config format.
struct SeriesComponent {
    struct Sinusoid {
        double amp = 0.0;
        double freq = 0.0;
        double phase = 0.0;
    };
    std::vector<double> poly;
    std::vector<Sinusoid> sines;

    double value(double s) const;
    double derivative(double s) const;
};

// Supporting curve s -> (x(s), y(s)) on [a, b].
class ParametricCurve {
public:
    using Map = std::function<Vec2(double)>;

    // Without an analytic derivative, central differences with step 1e-6 are used.
    ParametricCurve(std::string label, double a, double b, Map position, Map derivative = {});

    static ParametricCurve from_series(std::string label, double a, double b, SeriesComponent x,
                                       SeriesComponent y);

    Vec2 operator()(double s) const { return position_(s); }
    Vec2 derivative(double s) const;

    double a() const { return a_; }
    double b() const { return b_; }
    const std::string& label() const { return label_; }

private:
    std::string label_;
    double a_;
    double b_;
    Map position_;
    Map derivative_;
};

// Builtin curves: "sigma1" (constant curvature), "sigma2" (nonconstant
// curvature), "sigma3" (oscillating).
ParametricCurve builtin_curve(const std::string& label);

struct CurveDiscretization {
    std::vector<double> params;  // s at each node
    std::vector<Vec2> nodes;
    std::vector<double> weights;  // arc-length quadrature weights
    std::vector<Vec2> tangents;
    std::vector<Vec2> normals;  // tangent rotated by +90 degrees
    Vec2 start;                 // curve(a)
    Vec2 end;                   // curve(b)
    double total_length = 0.0;

    std::size_t size() const { return nodes.size(); }
};

// Composite 4-point Gauss-Legendre rule on ceil(m_nodes / 4) uniform
// parameter panels. Throws GeometryError on a degenerate derivative or a
// self-intersecting discretization.
CurveDiscretization discretize(const ParametricCurve& curve, int m_nodes);

// Throws GeometryError unless every node satisfies |x| <= 1 - clearance.
void check_clearance(const CurveDiscretization& disc, double clearance = 0.1);

// Distance from p to the polyline start -> nodes -> end.
double distance_to_curve(const Vec2& p, const CurveDiscretization& disc);

struct ThinInclusion {
    ParametricCurve curve;
    double half_thickness = 0.02;
    double eps = 5.0;
    double mu = 5.0;
    double eps0 = 1.0;
    double mu0 = 1.0;

    // Material positivity and h <= lambda_min / 10.
    void validate(double lambda_min) const;

    double eps_contrast() const { return eps - eps0; }
    // Eigenvalue of the polarization tensor along the tangent.
    double tangent_eigenvalue() const { return 2.0 * (1.0 / mu - 1.0 / mu0); }
    // Eigenvalue of the polarization tensor along the normal.
    double normal_eigenvalue() const { return 2.0 * (1.0 / mu0 - mu / (mu0 * mu0)); }
};

// Equispaced points x_n = (cos 2n pi/N, sin 2n pi/N), n = 1..N, on the unit circle.
struct BoundaryGrid {
    std::vector<Vec2> points;
    std::vector<Vec2> normals;
    double weight = 0.0;  // trapezoid weight 2 pi / N

    std::size_t size() const { return points.size(); }
    bool operator==(const BoundaryGrid& o) const { return points == o.points; }
};

// Measurement grids use N >= 16 (checked by the experiment config); the
// adjoint field needs N >= 64.
BoundaryGrid boundary_grid(int n_points);

}  // namespace mftd

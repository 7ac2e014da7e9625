#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mftd/forward.hpp"
#include "mftd/geometry.hpp"
#include "mftd/imaging.hpp"

namespace mftd {

// Lattice points whose value strictly exceeds the (1 - quantile) quantile of
// the map, thinned to the maximum of each lattice column. Sorted by x.
// Throws ExtractionError when nothing is selected.
std::vector<Vec2> extract_ridge(const ImageGrid& map, double quantile);

// Same selection, split into 8-connected lattice clusters before thinning.
// Clusters are ordered by size (largest first), ties by lowest lattice index.
std::vector<std::vector<Vec2>> extract_ridge_clusters(const ImageGrid& map, double quantile);

// Graph curve s -> (s, sum_p c_p T_p(t)), t = (2s - a - b) / (b - a), s in [a, b].
struct ChebyshevCurve {
    double a = -1.0;
    double b = 1.0;
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    void validate() const;

    double mapped(double s) const { return (2.0 * s - a - b) / (b - a); }
    double y(double s) const;
    double dy(double s) const;
    Vec2 operator()(double s) const { return {s, y(s)}; }

    ParametricCurve to_curve(const std::string& label) const;
};

// T_0..T_q at t by the three-term recurrence.
std::vector<double> chebyshev_t(int q, double t);

// Least squares over [min x, max x]. Throws FitError with fewer than q + 1
// distinct abscissae or a rank-deficient design.
ChebyshevCurve chebyshev_fit(const std::vector<Vec2>& points, int q = 5);

// Root-mean-square distance from `samples` equispaced points of the fitted
// curve to the reference polyline.
double rms_distance(const ChebyshevCurve& fit, const CurveDiscretization& truth, int samples = 201);

// Indices of the ceil(fraction * size) largest map values (ties by index).
std::vector<std::size_t> top_fraction(const ImageGrid& map, double fraction);

// Mean distance of the top-fraction lattice points to the nearest curve.
double localization_metric(const ImageGrid& map, const std::vector<CurveDiscretization>& curves,
                           double fraction = 0.01);

struct DiscrepancyReport {
    double n1 = 0.0;
    double n2 = 0.0;
    double n_inf = 0.0;
    double omega = 0.0;
    int N = 0;
    int L = 0;
};

// N1 = (1/L) sum_l sum_n |D|, N2 = (1/L) sum_l (sum_n |D|^2)^(1/2),
// Ninf = (1/L) sum_l max_n |D| for D = true - comp at frequency k.
// Throws ComparisonError unless grids, directions and omega_k agree.
DiscrepancyReport discrete_norms(const BoundaryDataset& true_data, const BoundaryDataset& comp_data, std::size_t k);

struct FitRow {
    std::string label;
    ChebyshevCurve curve;
    DiscrepancyReport norms;
};

// Text table with columns label, a, b, c0..cq, N1, N2, Ninf.
void write_fit_report(std::ostream& out, const std::vector<FitRow>& rows);

}  // namespace mftd

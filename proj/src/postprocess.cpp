#include "mftd/postprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include <Eigen/Dense>

#include "mftd/errors.hpp"

namespace mftd {

namespace {

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::size_t> select_above_quantile(const ImageGrid& map, double quantile) {
    if (!(quantile > 0.0 && quantile < 1.0)) throw ConfigError("ridge quantile must lie in (0, 1)");
    if (!map.lattice || map.size() == 0) throw ExtractionError("empty map");
    std::vector<double> sorted = map.values;
    std::sort(sorted.begin(), sorted.end());
    const auto pos = static_cast<std::size_t>(std::floor((1.0 - quantile) * static_cast<double>(sorted.size() - 1)));
    const double threshold = sorted[pos];
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map.values[i] > threshold) picked.push_back(i);
    if (picked.empty()) throw ExtractionError("no lattice point exceeds the quantile threshold");
    return picked;
}

// Per-column maximum of the given lattice indices, returned sorted by x.
std::vector<Vec2> thin_by_column(const ImageGrid& map, const std::vector<std::size_t>& idx) {
    std::map<int, std::size_t> best;
    for (std::size_t i : idx) {
        const int c = map.lattice->col[i];
        auto it = best.find(c);
        if (it == best.end() || map.values[i] > map.values[it->second]) best[c] = i;
    }
    std::vector<Vec2> out;
    out.reserve(best.size());
    for (const auto& [c, i] : best) out.push_back(map.lattice->points[i]);
    return out;
}

}  // namespace

std::vector<Vec2> extract_ridge(const ImageGrid& map, double quantile) {
    return thin_by_column(map, select_above_quantile(map, quantile));
}

std::vector<std::vector<Vec2>> extract_ridge_clusters(const ImageGrid& map, double quantile) {
    const auto picked = select_above_quantile(map, quantile);
    const Lattice& lat = *map.lattice;
    const std::size_t cells = static_cast<std::size_t>(lat.n) * lat.n;
    std::vector<long> at(cells, -1);  // lattice cell -> position in `picked`
    for (std::size_t p = 0; p < picked.size(); ++p)
        at[static_cast<std::size_t>(lat.row[picked[p]]) * lat.n + lat.col[picked[p]]] = static_cast<long>(p);

    std::vector<int> label(picked.size(), -1);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t p = 0; p < picked.size(); ++p) {
        if (label[p] >= 0) continue;
        const int id = static_cast<int>(groups.size());
        groups.emplace_back();
        std::vector<std::size_t> stack{p};
        label[p] = id;
        while (!stack.empty()) {
            const std::size_t q = stack.back();
            stack.pop_back();
            groups[id].push_back(picked[q]);
            const int r0 = lat.row[picked[q]], c0 = lat.col[picked[q]];
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    const int r = r0 + dr, c = c0 + dc;
                    if (r < 0 || c < 0 || r >= lat.n || c >= lat.n) continue;
                    const long nb = at[static_cast<std::size_t>(r) * lat.n + c];
                    if (nb >= 0 && label[static_cast<std::size_t>(nb)] < 0) {
                        label[static_cast<std::size_t>(nb)] = id;
                        stack.push_back(static_cast<std::size_t>(nb));
                    }
                }
        }
    }
    // groups are created in increasing order of their lowest index, so a stable sort keeps that tie-break
    std::stable_sort(groups.begin(), groups.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    std::vector<std::vector<Vec2>> out;
    for (const auto& g : groups) out.push_back(thin_by_column(map, g));
    return out;
}

void ChebyshevCurve::validate() const {
    if (coeffs.size() < 2) throw FitError("Chebyshev degree must be >= 1");
    if (!(b > a)) throw FitError("Chebyshev interval must be nondegenerate");
}

std::vector<double> chebyshev_t(int q, double t) {
    std::vector<double> T(static_cast<std::size_t>(q) + 1);
    T[0] = 1.0;
    if (q >= 1) T[1] = t;
    for (int p = 1; p < q; ++p) T[p + 1] = 2.0 * t * T[p] - T[p - 1];
    return T;
}

double ChebyshevCurve::y(double s) const {
    const auto T = chebyshev_t(degree(), mapped(s));
    double acc = 0.0;
    for (std::size_t p = 0; p < coeffs.size(); ++p) acc += coeffs[p] * T[p];
    return acc;
}

double ChebyshevCurve::dy(double s) const {
    // T_p' = p U_{p-1}, with U_0 = 1, U_1 = 2t, U_{p+1} = 2t U_p - U_{p-1}
    const double t = mapped(s);
    double acc = 0.0, um1 = 0.0, u = 1.0;
    for (std::size_t p = 1; p < coeffs.size(); ++p) {
        acc += coeffs[p] * static_cast<double>(p) * u;
        const double next = 2.0 * t * u - um1;
        um1 = u;
        u = next;
    }
    return acc * 2.0 / (b - a);
}

ParametricCurve ChebyshevCurve::to_curve(const std::string& label) const {
    validate();
    const ChebyshevCurve self = *this;
    return ParametricCurve(label, a, b, [self](double s) { return self(s); },
                           [self](double s) { return Vec2{1.0, self.dy(s)}; });
}

ChebyshevCurve chebyshev_fit(const std::vector<Vec2>& points, int q) {
    if (q < 1) throw FitError("Chebyshev degree must be >= 1");
    std::vector<double> xs;
    for (const Vec2& p : points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    const auto distinct = std::unique(xs.begin(), xs.end()) - xs.begin();
    if (distinct < q + 1)
        throw FitError("need " + std::to_string(q + 1) + " distinct abscissae, got " + std::to_string(distinct));

    ChebyshevCurve c;
    c.a = xs.front();
    c.b = xs[static_cast<std::size_t>(distinct) - 1];
    c.coeffs.assign(static_cast<std::size_t>(q) + 1, 0.0);
    Eigen::MatrixXd D(static_cast<Eigen::Index>(points.size()), q + 1);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto T = chebyshev_t(q, c.mapped(points[i].x));
        for (int p = 0; p <= q; ++p) D(static_cast<Eigen::Index>(i), p) = T[p];
        rhs[static_cast<Eigen::Index>(i)] = points[i].y;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
    qr.setThreshold(1e-12);
    if (qr.rank() < q + 1) throw FitError("rank-deficient Chebyshev design");
    const Eigen::VectorXd sol = qr.solve(rhs);
    for (int p = 0; p <= q; ++p) c.coeffs[p] = sol[p];
    return c;
}

double rms_distance(const ChebyshevCurve& fit, const CurveDiscretization& truth, int samples) {
    fit.validate();
    if (samples < 2) throw DomainError("rms_distance needs at least two samples");
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = fit.a + (fit.b - fit.a) * i / (samples - 1);
        const double d = distance_to_curve(fit(s), truth);
        acc += d * d;
    }
    return std::sqrt(acc / samples);
}

std::vector<std::size_t> top_fraction(const ImageGrid& map, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("top fraction must lie in (0, 1]");
    if (map.size() == 0) throw ExtractionError("empty map");
    const auto count = std::min(map.size(), static_cast<std::size_t>(std::ceil(fraction * map.size())));
    std::vector<std::size_t> idx(map.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + count, idx.end(), [&](std::size_t x, std::size_t y) {
        return map.values[x] > map.values[y] || (map.values[x] == map.values[y] && x < y);
    });
    idx.resize(count);
    return idx;
}

double localization_metric(const ImageGrid& map, const std::vector<CurveDiscretization>& curves, double fraction) {
    if (curves.empty()) throw DomainError("localization metric needs at least one curve");
    const auto idx = top_fraction(map, fraction);
    double acc = 0.0;
    for (std::size_t i : idx) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& c : curves) d = std::min(d, distance_to_curve(map.lattice->points[i], c));
        acc += d;
    }
    return acc / static_cast<double>(idx.size());
}

DiscrepancyReport discrete_norms(const BoundaryDataset& t, const BoundaryDataset& c, std::size_t k) {
    if (!(t.grid == c.grid)) throw ComparisonError("boundary grids differ");
    if (t.incident.directions != c.incident.directions) throw ComparisonError("direction sets differ");
    if (k >= t.K() || k >= c.K()) throw ComparisonError("frequency index out of range");
    if (t.incident.omegas[k] != c.incident.omegas[k]) throw ComparisonError("frequencies differ at the chosen index");

    DiscrepancyReport r;
    r.omega = t.incident.omegas[k];
    r.N = static_cast<int>(t.N());
    r.L = static_cast<int>(t.L());
    for (std::size_t l = 0; l < t.L(); ++l) {
        double s1 = 0.0, s2 = 0.0, mx = 0.0;
        for (std::size_t n = 0; n < t.N(); ++n) {
            const double d = std::abs(t.at(n, l, k) - c.at(n, l, k));
            s1 += d;
            s2 += d * d;
            mx = std::max(mx, d);
        }
        r.n1 += s1;
        r.n2 += std::sqrt(s2);
        r.n_inf += mx;
    }
    r.n1 /= r.L;
    r.n2 /= r.L;
    r.n_inf /= r.L;
    return r;
}

void write_fit_report(std::ostream& out, const std::vector<FitRow>& rows) {
    int q = 0;
    for (const auto& r : rows) q = std::max(q, r.curve.degree());
    out << "label\ta\tb";
    for (int p = 0; p <= q; ++p) out << "\tc" << p;
    out << "\tN1\tN2\tNinf\n";
    for (const auto& r : rows) {
        out << r.label << '\t' << num(r.curve.a) << '\t' << num(r.curve.b);
        for (int p = 0; p <= q; ++p) out << '\t' << num(p <= r.curve.degree() ? r.curve.coeffs[p] : 0.0);
        out << '\t' << num(r.norms.n1) << '\t' << num(r.norms.n2) << '\t' << num(r.norms.n_inf) << '\n';
    }
    if (!out) throw FormatError("failed writing fit report");
}

}  // namespace mftd

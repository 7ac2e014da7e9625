#include "mftd/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mftd/errors.hpp"
#include "mftd/parallel.hpp"
#include "mftd/specialfn.hpp"

namespace mftd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Node {
    Vec2 x;
    double w;
    double eps_term;  // (eps - eps0) w
    double lt;        // tangent eigenvalue * w
    double ln;        // normal eigenvalue * w
    Vec2 t;
    Vec2 n;
};

std::vector<Node> collect_nodes(const std::vector<ThinInclusion>& inclusions, int m_nodes) {
    std::vector<Node> nodes;
    for (const auto& inc : inclusions) {
        const auto d = discretize(inc.curve, m_nodes);
        for (std::size_t m = 0; m < d.size(); ++m) {
            nodes.push_back({d.nodes[m], d.weights[m], inc.eps_contrast() * d.weights[m],
                             inc.tangent_eigenvalue() * d.weights[m], inc.normal_eigenvalue() * d.weights[m],
                             d.tangents[m], d.normals[m]});
        }
    }
    return nodes;
}

ImageMeta oracle_meta(const char* name, const IncidentSet& incident, std::vector<double> omegas) {
    ImageMeta m;
    m.functional = name;
    m.omegas = std::move(omegas);
    m.L = static_cast<int>(incident.L());
    m.K = static_cast<int>(m.omegas.size());
    return m;
}

// Fills two maps from a per-point functor returning (eps part, mu part).
template <class F>
OraclePair fill_pair(std::shared_ptr<const Lattice> lattice, ImageMeta m1, ImageMeta m2, int workers, F&& f) {
    if (!lattice) throw DomainError("oracle maps need a lattice");
    OraclePair out{{lattice, std::vector<double>(lattice->size()), std::move(m1)},
                   {lattice, std::vector<double>(lattice->size()), std::move(m2)}};
    parallel_for(lattice->size(), workers, [&](std::size_t i) {
        const auto [a, b] = f(lattice->points[i]);
        out.first.values[i] = a;
        out.second.values[i] = b;
    });
    return out;
}

double mu_bracket(const Node& nd, const Vec2& d) { return nd.lt * dot(d, nd.t) + nd.ln * dot(d, nd.n); }

// Direction average of the mu bracket, used where the limit formulas leave d_l free.
double mean_mu_bracket(const Node& nd, const IncidentSet& incident) {
    double s = 0.0;
    for (const auto& d : incident.directions) s += mu_bracket(nd, d);
    return s / static_cast<double>(incident.L());
}

}  // namespace

ImageGrid closed_form_eps_map(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                         const IncidentSet& incident, std::size_t k, const OracleOptions& opts) {
    const double w = incident.omegas.at(k);
    const auto nodes = collect_nodes(inclusions, opts.m_nodes);
    return fill_pair(lattice, oracle_meta("closed_form_eps", incident, {w}), oracle_meta("unused", incident, {w}),
                     opts.workers,
                     [&](const Vec2& z) {
                         double s = 0.0;
                         for (const auto& nd : nodes)
                             for (const auto& d : incident.directions) s += nd.eps_term * std::cos(w * dot(d, nd.x - z));
                         return std::pair{s, 0.0};
                     })
        .first;
}

ImageGrid closed_form_mu_map(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, std::size_t k, const OracleOptions& opts) {
    const double w = incident.omegas.at(k);
    const auto nodes = collect_nodes(inclusions, opts.m_nodes);
    return fill_pair(lattice, oracle_meta("closed_form_mu", incident, {w}), oracle_meta("unused", incident, {w}),
                     opts.workers,
                     [&](const Vec2& z) {
                         double s = 0.0;
                         for (const auto& nd : nodes)
                             for (const auto& d : incident.directions)
                                 s += mu_bracket(nd, d) * std::cos(w * dot(d, nd.x - z));
                         return std::pair{s, 0.0};
                     })
        .first;
}

OraclePair oracle_E1_E2(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, std::size_t k_first, std::size_t k_last,
                        const OracleOptions& opts) {
    const double w1 = incident.omegas.at(k_first);
    const double wk = incident.omegas.at(k_last);
    if (!(wk > w1)) throw DegenerateBandError("band kernel needs omega_K > omega_1");
    const double xi1 = 0.5 * (wk - w1);
    const double xi2 = 0.5 * (wk + w1);
    const auto nodes = collect_nodes(inclusions, opts.m_nodes);
    return fill_pair(lattice, oracle_meta("E1", incident, {w1, wk}), oracle_meta("E2", incident, {w1, wk}),
                     opts.workers, [&](const Vec2& z) {
                         double e1 = 0.0, e2 = 0.0;
                         for (const auto& nd : nodes)
                             for (const auto& d : incident.directions) {
                                 const double s = dot(d, nd.x - z);
                                 const double kern = spherical_j0(xi1 * s) * std::cos(xi2 * s);
                                 e1 += nd.eps_term * kern;
                                 e2 += mu_bracket(nd, d) * kern;
                             }
                         return std::pair{e1, e2};
                     });
}

OraclePair oracle_E3_E4(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, double omega1, double omegaK, const OracleOptions& opts) {
    if (!(omegaK > omega1)) throw DegenerateBandError("band kernel needs omega_K > omega_1");
    const auto nodes = collect_nodes(inclusions, opts.m_nodes);
    std::vector<double> mu_avg;
    for (const auto& nd : nodes) mu_avg.push_back(mean_mu_bracket(nd, incident));
    return fill_pair(lattice, oracle_meta("E3", incident, {omega1, omegaK}),
                     oracle_meta("E4", incident, {omega1, omegaK}), opts.workers, [&](const Vec2& z) {
                         double e3 = 0.0, e4 = 0.0;
                         for (std::size_t m = 0; m < nodes.size(); ++m) {
                             const double t = distance(nodes[m].x, z);
                             const double band = lambda_fn(t, omegaK) - lambda_fn(t, omega1);
                             e3 += nodes[m].eps_term * band;
                             e4 += mu_avg[m] * band;
                         }
                         return std::pair{kTwoPi * e3, kTwoPi * e4};
                     });
}

OraclePair oracle_E5_E6(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, const OracleOptions& opts) {
    if (!lattice) throw DomainError("oracle maps need a lattice");
    const double cutoff = 0.5 * lattice->spacing;
    const auto nodes = collect_nodes(inclusions, opts.m_nodes);
    std::vector<double> mu_avg;
    for (const auto& nd : nodes) mu_avg.push_back(mean_mu_bracket(nd, incident));
    return fill_pair(lattice, oracle_meta("E5", incident, {}), oracle_meta("E6", incident, {}), opts.workers,
                     [&](const Vec2& z) {
                         double e5 = 0.0, e6 = 0.0;
                         for (std::size_t m = 0; m < nodes.size(); ++m) {
                             const double t = distance(nodes[m].x, z);
                             if (t < cutoff) continue;
                             e5 += nodes[m].eps_term * kTwoPi / t;
                             e6 += mu_avg[m] * kTwoPi / t;
                         }
                         return std::pair{e5, e6};
                     });
}

double correlation(const ImageGrid& a, const ImageGrid& b) {
    if (a.size() != b.size() || a.size() == 0) throw DomainError("correlation needs maps of equal, nonzero size");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a.values[i];
        mb += b.values[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a.values[i] - ma, db = b.values[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

}  // namespace mftd

#include "mftd/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mftd/errors.hpp"
#include "mftd/parallel.hpp"

namespace mftd {

namespace {

constexpr cdouble kI(0.0, 1.0);
constexpr double kFlat = 1e-14;

ImageMeta meta_for(const BoundaryDataset& data, const std::vector<std::size_t>& ks, std::string functional) {
    ImageMeta m;
    m.functional = std::move(functional);
    for (auto k : ks) m.omegas.push_back(data.incident.omegas.at(k));
    m.L = static_cast<int>(data.L());
    m.K = static_cast<int>(ks.size());
    m.noisy = data.noise.applied;
    m.snr_db = data.noise.snr_db;
    m.seed = data.noise.seed;
    return m;
}

void require_same_lattice(const ImageGrid& a, const ImageGrid& b) {
    if (a.lattice != b.lattice || a.size() != b.size())
        throw DomainError("image grids are defined on different lattices");
}

}  // namespace

std::shared_ptr<const Lattice> Lattice::make(int n, double clip) {
    if (n < 2) throw ConfigError("lattice needs at least 2 points per side");
    if (!(clip > 0.0 && clip <= AdjointField::kMaxRadius))
        throw ConfigError("lattice clip radius must lie in (0, 0.95]");
    auto lat = std::make_shared<Lattice>();
    lat->n = n;
    lat->clip = clip;
    lat->spacing = 2.0 / (n - 1);
    for (int j = 0; j < n; ++j) {
        const double y = -1.0 + lat->spacing * j;
        for (int i = 0; i < n; ++i) {
            const double x = -1.0 + lat->spacing * i;
            if (std::hypot(x, y) <= clip) {
                lat->points.push_back({x, y});
                lat->col.push_back(i);
                lat->row.push_back(j);
            }
        }
    }
    return lat;
}

double ImageGrid::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ImageGrid::min() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }
double ImageGrid::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

std::size_t ImageGrid::argmax() const {
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

ImageGrid normalize_max_abs(const ImageGrid& g) {
    const double m = g.max_abs();
    if (!(m >= kFlat))
        throw FlatMapError("map '" + g.meta.functional + "' is flat (max |value| = " + std::to_string(m) + ")");
    ImageGrid out = g;
    for (double& v : out.values) v /= m;
    return out;
}

ImageGrid combine_normalized(const ImageGrid& a, const ImageGrid& b, const std::string& functional) {
    require_same_lattice(a, b);
    const double ma = a.max_abs();
    const double mb = b.max_abs();
    if (!(ma >= kFlat)) throw FlatMapError("component '" + a.meta.functional + "' is flat");
    if (!(mb >= kFlat)) throw FlatMapError("component '" + b.meta.functional + "' is flat");
    ImageGrid out = a;
    out.meta.functional = functional;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = 0.5 * (a.values[i] / ma + b.values[i] / mb);
    return out;
}

AdjointField::AdjointField(const BoundaryDataset& data, std::size_t k, const NeumannOptions& opts)
    : nf_(data.incident.omegas.at(k), opts) {
    const std::size_t N = data.N();
    if (N < 64) throw ConfigError("adjoint field needs at least 64 boundary points, got " + std::to_string(N));
    // Orders grow with |z|, so the outermost admissible radius bounds them all.
    nmax_ = nf_.boundary_expansion(kMaxRadius).order() + 8;
    std::vector<double> theta(N);
    for (std::size_t j = 0; j < N; ++j) theta[j] = std::atan2(data.grid.points[j].y, data.grid.points[j].x);

    coeff_.assign(data.L(), std::vector<cdouble>(2 * nmax_ + 1, cdouble(0.0, 0.0)));
    std::vector<cdouble> step(N), phase(N);
    for (std::size_t j = 0; j < N; ++j) step[j] = std::exp(-kI * theta[j]);
    for (std::size_t l = 0; l < data.L(); ++l) {
        const cdouble* tr = data.trace(l, k);
        auto& c = coeff_[l];
        std::fill(phase.begin(), phase.end(), cdouble(1.0, 0.0));
        for (int n = 0; n <= nmax_; ++n) {
            cdouble pos(0.0, 0.0), neg(0.0, 0.0);
            for (std::size_t j = 0; j < N; ++j) {
                pos += tr[j] * phase[j];
                neg += tr[j] * std::conj(phase[j]);
                phase[j] *= step[j];
            }
            c[nmax_ + n] = data.grid.weight * pos;
            c[nmax_ - n] = data.grid.weight * neg;
        }
    }
}

void AdjointField::evaluate(const Vec2& z, std::vector<AdjointSample>& out) const {
    const double r = norm(z);
    if (r > kMaxRadius + 1e-12) throw DomainError("adjoint field evaluated outside |z| <= 0.95");
    const double th = r > 0.0 ? std::atan2(z.y, z.x) : 0.0;
    const RadialExpansion e = nf_.boundary_expansion(r);
    if (e.order() > nmax_) throw DomainError("adjoint field: Neumann expansion exceeds the precomputed order");

    const std::size_t L = coeff_.size();
    out.assign(L, AdjointSample{});
    std::vector<cdouble> dr(L, cdouble(0.0, 0.0)), da(L, cdouble(0.0, 0.0));
    const cdouble rot = std::exp(kI * th);
    cdouble a(1.0, 0.0);
    for (int n = 0; n <= e.order(); ++n) {
        const cdouble ac = std::conj(a);
        for (std::size_t l = 0; l < L; ++l) {
            const cdouble p = a * coeff_[l][nmax_ + n];
            const cdouble q = ac * coeff_[l][nmax_ - n];
            const cdouble cpart = 0.5 * (p + q);              // sum_j w u_j cos(n(theta - theta_j))
            const cdouble spart = (p - q) / cdouble(0.0, 2.0);  // sum_j w u_j sin(n(theta - theta_j))
            out[l].value += e.value[n] * cpart;
            dr[l] += e.radial[n] * cpart;
            da[l] -= e.angular[n] * spart;
        }
        a *= rot;
    }
    const Vec2 er{std::cos(th), std::sin(th)};
    const Vec2 et = rotate90(er);
    for (std::size_t l = 0; l < L; ++l) {
        out[l].gradient = {dr[l] * er.x + da[l] * et.x, dr[l] * er.y + da[l] * et.y};
    }
}

AdjointSample adjoint_field(const Vec2& z, const BoundaryDataset& data, std::size_t l, std::size_t k,
                            const NeumannOptions& opts) {
    if (l >= data.L()) throw DomainError("adjoint_field: direction index out of range");
    const AdjointField field(data, k, opts);
    std::vector<AdjointSample> out;
    field.evaluate(z, out);
    return out[l];
}

TdComponents td_components(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                           const ImagingOptions& opts) {
    if (!lattice) throw DomainError("td maps need a lattice");
    if (k >= data.K()) throw DomainError("frequency index out of range");
    const AdjointField field(data, k, opts.neumann);
    const double w = field.omega();
    const std::size_t L = data.L();

    TdComponents maps{{lattice, std::vector<double>(lattice->size(), 0.0), meta_for(data, {k}, "td_eps")},
                      {lattice, std::vector<double>(lattice->size(), 0.0), meta_for(data, {k}, "td_mu")}};
    parallel_for(lattice->size(), opts.workers, [&](std::size_t i) {
        const Vec2 z = lattice->points[i];
        std::vector<AdjointSample> adj;
        field.evaluate(z, adj);
        double se = 0.0, sm = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            const PlaneWave pw = plane_wave(data.incident.directions[l], w, z);
            se += (adj[l].value * std::conj(pw.value)).real();
            sm += (adj[l].gradient.x * std::conj(pw.gradient.x) + adj[l].gradient.y * std::conj(pw.gradient.y)).real();
        }
        maps.eps.values[i] = se;
        maps.mu.values[i] = sm;
    });
    return maps;
}

ImageGrid td_eps_map(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                     const ImagingOptions& opts) {
    return td_components(std::move(lattice), data, k, opts).eps;
}

ImageGrid td_mu_map(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                    const ImagingOptions& opts) {
    return td_components(std::move(lattice), data, k, opts).mu;
}

ImageGrid etd_single(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                     const ImagingOptions& opts) {
    const TdComponents c = td_components(std::move(lattice), data, k, opts);
    return combine_normalized(c.eps, c.mu, "etd_single");
}

MultiFrequencyMaps etd_multi_components(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data,
                                        const std::vector<std::size_t>& ks, const ImagingOptions& opts) {
    if (ks.empty()) throw DomainError("etd_multi needs at least one frequency");
    if (!lattice) throw DomainError("td maps need a lattice");
    const std::size_t P = lattice->size();
    MultiFrequencyMaps out{{lattice, std::vector<double>(P, 0.0), meta_for(data, ks, "etd_multi")},
                           {lattice, std::vector<double>(P, 0.0), meta_for(data, ks, "etd_multi_eps")},
                           {lattice, std::vector<double>(P, 0.0), meta_for(data, ks, "etd_multi_mu")}};
    for (std::size_t k : ks) {
        const TdComponents c = td_components(lattice, data, k, opts);
        const ImageGrid single = combine_normalized(c.eps, c.mu, "etd_single");
        const double me = c.eps.max_abs();
        const double mm = c.mu.max_abs();
        for (std::size_t i = 0; i < P; ++i) {
            out.combined.values[i] += single.values[i];
            out.eps.values[i] += c.eps.values[i] / me;
            out.mu.values[i] += c.mu.values[i] / mm;
        }
    }
    const double K = static_cast<double>(ks.size());
    for (std::size_t i = 0; i < P; ++i) {
        out.combined.values[i] /= K;
        out.eps.values[i] /= K;
        out.mu.values[i] /= K;
    }
    return out;
}

ImageGrid etd_multi(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data,
                    const std::vector<std::size_t>& ks, const ImagingOptions& opts) {
    return etd_multi_components(std::move(lattice), data, ks, opts).combined;
}

std::vector<std::size_t> all_frequencies(const BoundaryDataset& data) {
    std::vector<std::size_t> ks(data.K());
    for (std::size_t k = 0; k < ks.size(); ++k) ks[k] = k;
    return ks;
}

}  // namespace mftd

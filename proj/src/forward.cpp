#include "mftd/forward.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "mftd/errors.hpp"
#include "mftd/parallel.hpp"
#include "mftd/seeding.hpp"

namespace mftd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cdouble kI(0.0, 1.0);

}  // namespace

void IncidentSet::validate() const {
    if (directions.empty()) throw ConfigError("incident set needs at least one direction");
    if (omegas.empty()) throw ConfigError("incident set needs at least one frequency");
    for (const auto& d : directions) {
        if (std::abs(norm(d) - 1.0) > 1e-12) throw ConfigError("incident directions must be unit vectors");
    }
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        if (!(omegas[k] > 0.0) || !std::isfinite(omegas[k])) throw ConfigError("frequencies must be finite and > 0");
        if (k > 0 && !(omegas[k] > omegas[k - 1])) throw ConfigError("frequencies must be strictly increasing");
    }
}

IncidentSet make_incident_set(int L, int K, double lambda_min, double lambda_max) {
    if (L < 1) throw ConfigError("L must be >= 1");
    if (K < 1) throw ConfigError("K must be >= 1");
    if (!(lambda_min > 0.0 && lambda_max > 0.0)) throw ConfigError("wavelengths must be > 0");
    if (K > 1 && !(lambda_max > lambda_min)) throw ConfigError("multi-frequency band needs lambda_max > lambda_min");
    IncidentSet s;
    for (int l = 0; l < L; ++l) {
        const double th = 2.0 * kPi * l / L;
        s.directions.push_back({std::cos(th), std::sin(th)});
    }
    const double w1 = 2.0 * kPi / lambda_max;
    const double wk = 2.0 * kPi / lambda_min;
    for (int k = 0; k < K; ++k) s.omegas.push_back(K == 1 ? w1 : w1 + (wk - w1) * k / (K - 1));
    s.validate();
    return s;
}

PlaneWave plane_wave(const Vec2& d, double omega, const Vec2& x) {
    const cdouble u = std::exp(kI * omega * dot(d, x));
    const cdouble g = kI * omega * u;
    return {u, {g * d.x, g * d.y}};
}

BoundaryDataset BoundaryDataset::zeros(BoundaryGrid grid, IncidentSet incident) {
    BoundaryDataset d;
    d.grid = std::move(grid);
    d.incident = std::move(incident);
    d.traces.assign(d.N() * d.L() * d.K(), cdouble(0.0, 0.0));
    return d;
}

BoundaryDataset synthesize(const std::vector<ThinInclusion>& inclusions, const IncidentSet& incident,
                           const BoundaryGrid& grid, int m_nodes, const SynthesisOptions& opts) {
    incident.validate();
    if (grid.size() == 0) throw ConfigError("empty boundary grid");

    struct Prepared {
        const ThinInclusion* inc;
        CurveDiscretization disc;
    };
    std::vector<Prepared> prepared;
    for (const auto& inc : inclusions) {
        if (std::abs(inc.eps0 * inc.mu0 - 1.0) > 1e-12)
            throw ConfigError("background must satisfy eps0 * mu0 = 1 for plane-wave incidence");
        auto disc = discretize(inc.curve, m_nodes);
        check_clearance(disc, opts.clearance);
        prepared.push_back({&inc, std::move(disc)});
    }

    BoundaryDataset out = BoundaryDataset::zeros(grid, incident);
    const std::size_t N = out.N();
    const std::size_t L = out.L();
    std::vector<double> theta_y(N);
    for (std::size_t j = 0; j < N; ++j) theta_y[j] = std::atan2(grid.points[j].y, grid.points[j].x);

    parallel_for(out.K(), opts.workers, [&](std::size_t k) {
        const double w = incident.omegas[k];
        const NeumannFunction nf(w, opts.neumann);
        std::vector<KernelSample> kernel(N);
        for (const auto& prep : prepared) {
            const ThinInclusion& inc = *prep.inc;
            const double lt = inc.tangent_eigenvalue();
            const double ln = inc.normal_eigenvalue();
            const double de = inc.eps_contrast();
            const auto& disc = prep.disc;
            for (std::size_t m = 0; m < disc.size(); ++m) {
                const Vec2 x = disc.nodes[m];
                const double r = norm(x);
                const double tx = r > 0.0 ? std::atan2(x.y, x.x) : 0.0;
                const RadialExpansion e = nf.boundary_expansion(r);
                for (std::size_t j = 0; j < N; ++j) kernel[j] = evaluate(e, tx, theta_y[j]);

                const double factor = inc.half_thickness * disc.weights[m];
                const Vec2 t = disc.tangents[m];
                const Vec2 nrm = disc.normals[m];
                for (std::size_t l = 0; l < L; ++l) {
                    const PlaneWave pw = plane_wave(incident.directions[l], w, x);
                    // M grad u = lt (grad u . t) t + ln (grad u . n) n
                    const cdouble gt = lt * dot(pw.gradient, t);
                    const cdouble gn = ln * dot(pw.gradient, nrm);
                    const cdouble mono = w * w * de * pw.value;
                    cdouble* tr = out.trace(l, k);
                    for (std::size_t j = 0; j < N; ++j) {
                        const Vec2& g = kernel[j].gradient;
                        tr[j] += factor * (gt * dot(t, g) + gn * dot(nrm, g) + mono * kernel[j].value);
                    }
                }
            }
        }
    });
    return out;
}

BoundaryDataset add_awgn(const BoundaryDataset& data, double snr_db, std::uint64_t seed) {
    if (data.noise.applied) throw StateError("noise has already been applied to this dataset");
    if (std::isinf(snr_db) && snr_db > 0) return data;
    if (!std::isfinite(snr_db)) throw DomainError("snr_db must be finite or +infinity");

    BoundaryDataset out = data;
    const std::size_t N = data.N();
    for (std::size_t k = 0; k < data.K(); ++k) {
        for (std::size_t l = 0; l < data.L(); ++l) {
            cdouble* tr = out.trace(l, k);
            double power = 0.0;
            for (std::size_t j = 0; j < N; ++j) power += std::norm(tr[j]);
            power /= static_cast<double>(N);
            const double sigma = std::sqrt(0.5 * power * std::pow(10.0, -snr_db / 10.0));
            std::mt19937_64 rng(trace_seed(seed, static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(k)));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (std::size_t j = 0; j < N; ++j) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                tr[j] += sigma * cdouble(re, im);
            }
        }
    }
    out.noise = {true, snr_db, seed};
    return out;
}

MsrMatrix decompose_msr(Eigen::MatrixXcd A, double omega) {
    MsrMatrix m;
    m.omega = omega;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    m.singular_values = svd.singularValues();
    m.U = svd.matrixU();
    m.V = svd.matrixV();
    m.A = std::move(A);
    return m;
}

MsrMatrix assemble_msr(const BoundaryDataset& data, std::size_t omega_index) {
    if (omega_index >= data.K()) throw DomainError("assemble_msr: frequency index out of range");
    const std::size_t L = data.L();
    const std::size_t N = data.N();
    const double w = data.incident.omegas[omega_index];
    // Observation kernel i omega (d_j . nu) e^{i omega d_j . y}, weighted by 2 pi / N.
    Eigen::MatrixXcd obs(L, N);
    for (std::size_t j = 0; j < L; ++j) {
        const Vec2 d = data.incident.directions[j];
        for (std::size_t n = 0; n < N; ++n) {
            const Vec2 y = data.grid.points[n];
            obs(j, n) = data.grid.weight * kI * w * dot(d, data.grid.normals[n]) * std::exp(kI * w * dot(d, y));
        }
    }
    Eigen::MatrixXcd traces(N, L);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t n = 0; n < N; ++n) traces(n, l) = data.at(n, l, omega_index);
    return decompose_msr(obs * traces, w);
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, int line) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw FormatError("dataset line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    return v;
}

long long parse_int(std::string_view s, int line) {
    long long v = 0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw FormatError("dataset line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

constexpr const char* kMagic = "# mftd-dataset v1";

}  // namespace

void write_dataset(std::ostream& out, const BoundaryDataset& data) {
    out << kMagic << '\n';
    out << "N " << data.N() << '\n' << "L " << data.L() << '\n' << "K " << data.K() << '\n';
    out << "omega";
    for (double w : data.incident.omegas) out << ' ' << fmt_double(w);
    out << '\n';
    for (const auto& d : data.incident.directions) out << "direction " << fmt_double(d.x) << ' ' << fmt_double(d.y) << '\n';
    if (data.noise.applied) {
        out << "noise snr_db " << fmt_double(data.noise.snr_db) << " seed " << data.noise.seed << '\n';
    } else {
        out << "noise clean\n";
    }
    out << "n,l,k,re,im\n";
    for (std::size_t k = 0; k < data.K(); ++k)
        for (std::size_t l = 0; l < data.L(); ++l)
            for (std::size_t n = 0; n < data.N(); ++n) {
                const cdouble v = data.at(n, l, k);
                out << n + 1 << ',' << l + 1 << ',' << k + 1 << ',' << fmt_double(v.real()) << ','
                    << fmt_double(v.imag()) << '\n';
            }
    if (!out) throw FormatError("failed writing dataset");
}

BoundaryDataset read_dataset(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next = [&]() -> std::string {
        if (!std::getline(in, line)) throw FormatError("dataset truncated after line " + std::to_string(lineno));
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    if (next() != kMagic) throw FormatError("not an mftd dataset (missing magic line)");

    auto header_count = [&](const char* key) {
        const auto w = words(next());
        if (w.size() != 2 || w[0] != key) throw FormatError(std::string("expected header '") + key + "'");
        const long long v = parse_int(w[1], lineno);
        if (v < 1) throw FormatError(std::string("header ") + key + " must be >= 1");
        return static_cast<std::size_t>(v);
    };
    const std::size_t N = header_count("N");
    const std::size_t L = header_count("L");
    const std::size_t K = header_count("K");

    IncidentSet inc;
    {
        const auto w = words(next());
        if (w.empty() || w[0] != "omega" || w.size() != K + 1) throw FormatError("bad omega header");
        for (std::size_t k = 0; k < K; ++k) inc.omegas.push_back(parse_double(w[k + 1], lineno));
    }
    for (std::size_t l = 0; l < L; ++l) {
        const auto w = words(next());
        if (w.size() != 3 || w[0] != "direction") throw FormatError("bad direction header");
        inc.directions.push_back({parse_double(w[1], lineno), parse_double(w[2], lineno)});
    }
    try {
        inc.validate();
    } catch (const ConfigError& e) {
        throw FormatError(std::string("invalid incident header: ") + e.what());
    }

    BoundaryDataset data = BoundaryDataset::zeros(boundary_grid(static_cast<int>(N)), std::move(inc));
    {
        const auto w = words(next());
        if (w.size() == 2 && w[0] == "noise" && w[1] == "clean") {
            data.noise = {};
        } else if (w.size() == 5 && w[0] == "noise" && w[1] == "snr_db" && w[3] == "seed") {
            std::uint64_t seed = 0;
            auto res = std::from_chars(w[4].data(), w[4].data() + w[4].size(), seed);
            if (res.ec != std::errc()) throw FormatError("bad noise seed");
            data.noise = {true, parse_double(w[2], lineno), seed};
        } else {
            throw FormatError("bad noise header");
        }
    }
    if (next() != "n,l,k,re,im") throw FormatError("missing column header");

    std::vector<char> seen(data.traces.size(), 0);
    for (std::size_t row = 0; row < data.traces.size(); ++row) {
        const auto f = split(next(), ',');
        if (f.size() != 5) throw FormatError("dataset line " + std::to_string(lineno) + ": expected 5 fields");
        const long long n = parse_int(f[0], lineno), l = parse_int(f[1], lineno), k = parse_int(f[2], lineno);
        if (n < 1 || l < 1 || k < 1 || static_cast<std::size_t>(n) > N || static_cast<std::size_t>(l) > L ||
            static_cast<std::size_t>(k) > K)
            throw FormatError("dataset line " + std::to_string(lineno) + ": index out of range");
        const std::size_t idx = data.index(n - 1, l - 1, k - 1);
        if (seen[idx]) throw FormatError("dataset line " + std::to_string(lineno) + ": duplicate entry");
        seen[idx] = 1;
        data.traces[idx] = {parse_double(f[3], lineno), parse_double(f[4], lineno)};
    }
    return data;
}

void write_dataset_file(const std::string& path, const BoundaryDataset& data) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    write_dataset(out, data);
}

BoundaryDataset read_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return read_dataset(in);
}

}  // namespace mftd

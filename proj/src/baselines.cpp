#include "mftd/baselines.hpp"

#include <cmath>

#include "mftd/errors.hpp"
#include "mftd/parallel.hpp"

namespace mftd {

namespace {

constexpr cdouble kI(0.0, 1.0);

Eigen::VectorXcd unit_test_vector(const Vec2& x, double omega, const std::vector<Vec2>& directions,
                                  const TestVectorConfig& cfg) {
    Eigen::VectorXcd w = test_vector(x, omega, directions, cfg);
    const double n = w.norm();
    if (n == 0.0) throw ConfigError("test vector vanishes for every direction");
    return w / n;
}

ImageMeta baseline_meta(const char* name, std::vector<double> omegas, std::size_t L) {
    ImageMeta m;
    m.functional = name;
    m.K = static_cast<int>(omegas.size());
    m.omegas = std::move(omegas);
    m.L = static_cast<int>(L);
    return m;
}

void check_shape(const MsrMatrix& msr, const std::vector<Vec2>& directions) {
    const auto L = static_cast<Eigen::Index>(directions.size());
    if (L < 1) throw ConfigError("baselines need at least one direction");
    if (msr.A.rows() != L || msr.A.cols() != L) throw DomainError("MSR matrix size does not match the directions");
}

}  // namespace

void TestVectorConfig::validate() const {
    if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0) throw ConfigError("test vector weights c must not all be zero");
}

Eigen::VectorXcd test_vector(const Vec2& x, double omega, const std::vector<Vec2>& directions,
                             const TestVectorConfig& cfg) {
    cfg.validate();
    if (directions.empty()) throw ConfigError("test vector needs at least one direction");
    Eigen::VectorXcd w(static_cast<Eigen::Index>(directions.size()));
    for (std::size_t l = 0; l < directions.size(); ++l) {
        const Vec2& d = directions[l];
        const double amp = cfg.c[0] + cfg.c[1] * d.x + cfg.c[2] * d.y;
        w[static_cast<Eigen::Index>(l)] = amp * std::exp(kI * omega * dot(d, x));
    }
    return w;
}

int signal_space_dim(const MsrMatrix& msr, double drop_tol) {
    if (!(drop_tol > 0.0 && drop_tol <= 1.0)) throw ConfigError("drop_tol must lie in (0, 1]");
    const auto& s = msr.singular_values;
    if (s.size() == 0 || !(s[0] > 0.0)) throw EmptySignalError("MSR matrix has no nonzero singular value");
    int M = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] >= drop_tol * s[0]) M = static_cast<int>(i) + 1;
    const int L = static_cast<int>(s.size());
    return L > 1 ? std::min(M, L - 1) : M;
}

ImageGrid music_map(std::shared_ptr<const Lattice> lattice, const MsrMatrix& msr,
                    const std::vector<Vec2>& directions, int M, const MusicOptions& opts) {
    if (!lattice) throw DomainError("music_map needs a lattice");
    check_shape(msr, directions);
    const int L = static_cast<int>(directions.size());
    if (M < 1) throw ConfigError("signal subspace dimension must be >= 1");
    if (M >= L) throw EmptyNoiseSubspaceError("M = " + std::to_string(M) + " leaves no noise subspace for L = " +
                                              std::to_string(L));
    opts.test.validate();
    const Eigen::MatrixXcd Us = msr.U.leftCols(M);
    ImageGrid g{lattice, std::vector<double>(lattice->size()), baseline_meta("music", {msr.omega}, directions.size())};
    std::vector<char> clamped(lattice->size(), 0);
    parallel_for(lattice->size(), opts.workers, [&](std::size_t i) {
        const Eigen::VectorXcd w = unit_test_vector(lattice->points[i], msr.omega, directions, opts.test);
        const Eigen::VectorXcd pw = w - Us * (Us.adjoint() * w);
        const double n = pw.norm();
        if (n * opts.ceiling <= 1.0) {
            g.values[i] = opts.ceiling;
            clamped[i] = 1;
        } else {
            g.values[i] = 1.0 / n;
        }
    });
    for (char c : clamped) g.meta.saturated = g.meta.saturated || c;
    return g;
}

ImageGrid kirchhoff_map(std::shared_ptr<const Lattice> lattice, const MsrMatrix& msr,
                        const std::vector<Vec2>& directions, const KirchhoffOptions& opts) {
    if (!lattice) throw DomainError("kirchhoff_map needs a lattice");
    check_shape(msr, directions);
    opts.test.validate();
    ImageGrid g{lattice, std::vector<double>(lattice->size()), baseline_meta("kirchhoff", {msr.omega}, directions.size())};
    parallel_for(lattice->size(), opts.workers, [&](std::size_t i) {
        const Eigen::VectorXcd w = unit_test_vector(lattice->points[i], msr.omega, directions, opts.test);
        const cdouble q = w.dot(msr.A * w.conjugate());  // dot conjugates w
        g.values[i] = std::abs(q);
    });
    return g;
}

ImageGrid multi_kirchhoff_map(std::shared_ptr<const Lattice> lattice, const std::vector<MsrMatrix>& msrs,
                              const std::vector<Vec2>& directions, const KirchhoffOptions& opts) {
    if (msrs.empty()) throw DomainError("multi_kirchhoff_map needs at least one frequency");
    std::vector<double> omegas;
    ImageGrid total{lattice, std::vector<double>(lattice ? lattice->size() : 0, 0.0), {}};
    for (const auto& m : msrs) {
        const ImageGrid one = kirchhoff_map(lattice, m, directions, opts);
        for (std::size_t i = 0; i < total.size(); ++i) total.values[i] += one.values[i];
        omegas.push_back(m.omega);
    }
    total.meta = baseline_meta("multi_kirchhoff", std::move(omegas), directions.size());
    return total;
}

}  // namespace mftd

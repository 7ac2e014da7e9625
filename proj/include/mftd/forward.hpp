#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mftd/geometry.hpp"
#include "mftd/vec2.hpp"

namespace mftd {

using cdouble = std::complex<double>;

struct IncidentSet {
    std::vector<Vec2> directions;
    std::vector<double> omegas;

    std::size_t L() const { return directions.size(); }
    std::size_t K() const { return omegas.size(); }
    // Unit directions, strictly increasing positive frequencies.
    void validate() const;
};

// d_l = (cos 2(l-1)pi/L, sin 2(l-1)pi/L) and K frequencies equispaced in omega
// between 2 pi / lambda_max and 2 pi / lambda_min. K = 1 uses 2 pi / lambda_max.
IncidentSet make_incident_set(int L, int K, double lambda_min, double lambda_max);

struct PlaneWave {
    cdouble value;
    CVec2 gradient;
};

// e^{i omega d.x} and its gradient.
PlaneWave plane_wave(const Vec2& d, double omega, const Vec2& x);

struct NeumannOptions {
    int trunc = 0;  // minimum azimuthal order; 0 selects max(30, ceil(2 omega) + 20)
    double series_tol = 1e-12;
    int max_order = 8000;
    double resonance_tol = 1e-8;

    void validate() const;
};

struct ResonanceHit {
    int order = 0;
    double omega = 0.0;
    double derivative = 0.0;  // J_n'(omega)
};

// Smallest |J_n'(omega)| below tol over the orders n <= omega, where the
// zeros of J_n' live. Empty when omega is safely away from a Neumann eigenvalue.
std::optional<ResonanceHit> find_resonance(double omega, double tol = 1e-8);

// Kernel of N(x, y) at |x| = r for y on the unit circle, as a Fourier series
// in phi = theta_x - theta_y:
//   N           =  sum_n value[n]   cos(n phi)
//   d_r N       =  sum_n radial[n]  cos(n phi)
//   (1/r) d_t N = -sum_n angular[n] sin(n phi)
struct RadialExpansion {
    double r = 0.0;
    std::vector<double> value;
    std::vector<double> radial;
    std::vector<double> angular;

    int order() const { return static_cast<int>(value.size()) - 1; }
};

struct KernelSample {
    double value = 0.0;
    Vec2 gradient;  // with respect to x
};

// Evaluates an expansion for x at polar angle theta_x against y at theta_y.
KernelSample evaluate(const RadialExpansion& e, double theta_x, double theta_y);

// Real-valued Neumann function of the unit disk for Delta + omega^2:
// the free-space kernel (i/4) H0(omega |x - y|) plus the Fourier-Bessel
// correction that cancels its normal derivative on |x| = 1. The imaginary
// parts of the two cancel identically, leaving
//   -(1/4) Y0(omega |x - y|) + (1/4) sum_n eps_n Y_n'/J_n' J_n(omega r) J_n(omega r') cos(n dtheta)
// for interior y, and (1/(2 pi omega)) sum_n eps_n J_n(omega r)/J_n'(omega) cos(n dtheta) on |y| = 1.
// Orders beyond omega are handled through Bessel ratios, so no term underflows.
class NeumannFunction {
public:
    // Throws ResonanceError when omega^2 is within resonance_tol of an eigenvalue.
    explicit NeumannFunction(double omega, NeumannOptions opts = {});

    double omega() const { return omega_; }
    const NeumannOptions& options() const { return opts_; }
    int default_trunc() const;

    double value(const Vec2& x, const Vec2& y) const;
    Vec2 gradient_x(const Vec2& x, const Vec2& y) const;

    // Requires 0 <= r < 1.
    RadialExpansion boundary_expansion(double r) const;

private:
    struct ScaledJ;
    ScaledJ scaled_j(double r, int nmax) const;
    RadialExpansion interior_expansion(double r1, double r2) const;
    int initial_order(double rr) const;

    double omega_;
    NeumannOptions opts_;
    int n0_;                    // last order evaluated directly
    std::vector<double> jw_;    // J_n(omega), n <= n0 + 1
    std::vector<double> jpw_;   // J_n'(omega), n <= n0
    std::vector<double> ypw_;   // Y_n'(omega), n <= n0
    std::vector<double> rho_;   // J_n / J_{n-1} at omega
    std::vector<double> beta_;  // J_n' / J_n at omega, n > n0
    std::vector<double> q_;     // J_n^2 Y_n' / J_n' at omega, n > n0
};

struct NoiseMeta {
    bool applied = false;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

// Scattered boundary traces (u_tot - u_bac)(x_n; d_l, omega_k), stored with n
// fastest, then l, then k.
struct BoundaryDataset {
    BoundaryGrid grid;
    IncidentSet incident;
    std::vector<cdouble> traces;
    NoiseMeta noise;

    static BoundaryDataset zeros(BoundaryGrid grid, IncidentSet incident);

    std::size_t N() const { return grid.size(); }
    std::size_t L() const { return incident.L(); }
    std::size_t K() const { return incident.K(); }
    std::size_t index(std::size_t n, std::size_t l, std::size_t k) const { return (k * L() + l) * N() + n; }
    cdouble& at(std::size_t n, std::size_t l, std::size_t k) { return traces[index(n, l, k)]; }
    const cdouble& at(std::size_t n, std::size_t l, std::size_t k) const { return traces[index(n, l, k)]; }
    const cdouble* trace(std::size_t l, std::size_t k) const { return traces.data() + index(0, l, k); }
    cdouble* trace(std::size_t l, std::size_t k) { return traces.data() + index(0, l, k); }
};

struct SynthesisOptions {
    int workers = 0;  // 0 uses all cores
    double clearance = 0.1;
    NeumannOptions neumann;
};

// Asymptotic scattered traces of thin inclusions: for each (n, l, k)
//   h sum over nodes w [grad u_bac . M grad_x N(x, x_n) + omega^2 (eps - eps0) u_bac N(x, x_n)]
// with M applied through its tangent/normal eigenstructure. Requires eps0 mu0 = 1,
// the background for which e^{i omega d.x} solves the Helmholtz equation.
BoundaryDataset synthesize(const std::vector<ThinInclusion>& inclusions, const IncidentSet& incident,
                           const BoundaryGrid& grid, int m_nodes, const SynthesisOptions& opts = {});

// Complex AWGN per (l, k) trace vector at the given SNR (relative to that
// vector's mean power). +infinity returns the input unchanged. Throws
// StateError on already noisy input.
BoundaryDataset add_awgn(const BoundaryDataset& data, double snr_db, std::uint64_t seed);

struct MsrMatrix {
    double omega = 0.0;
    Eigen::MatrixXcd A;
    Eigen::VectorXd singular_values;  // non-increasing
    Eigen::MatrixXcd U;
    Eigen::MatrixXcd V;  // A = U diag(s) V^H
};

// A_jl = trapezoid over the boundary of u_scat(y; d_l) * i omega (d_j . nu) e^{i omega d_j . y},
// observation directions taken as -d_j.
MsrMatrix assemble_msr(const BoundaryDataset& data, std::size_t omega_index);
// SVD of an already assembled matrix.
MsrMatrix decompose_msr(Eigen::MatrixXcd A, double omega);

// Text format: header lines then rows "n,l,k,re,im" (1-based indices), with
// shortest round-trip number formatting.
void write_dataset(std::ostream& out, const BoundaryDataset& data);
BoundaryDataset read_dataset(std::istream& in);
void write_dataset_file(const std::string& path, const BoundaryDataset& data);
BoundaryDataset read_dataset_file(const std::string& path);

}  // namespace mftd

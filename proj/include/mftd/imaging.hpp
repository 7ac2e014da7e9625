#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mftd/forward.hpp"
#include "mftd/vec2.hpp"

namespace mftd {

// n x n points over [-1, 1]^2, keeping those with |z| <= clip. Points are
// ordered row by row, bottom (y = -1) to top, left to right within a row.
struct Lattice {
    int n = 0;
    double clip = 0.0;
    double spacing = 0.0;
    std::vector<Vec2> points;
    std::vector<int> col;  // column index of each point
    std::vector<int> row;  // row index of each point

    std::size_t size() const { return points.size(); }

    static std::shared_ptr<const Lattice> make(int n = 128, double clip = 0.95);
};

struct ImageMeta {
    std::string functional;
    std::vector<double> omegas;
    int L = 0;
    int K = 0;
    bool noisy = false;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    bool saturated = false;  // some values were clamped to a ceiling
};

struct ImageGrid {
    std::shared_ptr<const Lattice> lattice;
    std::vector<double> values;  // one per lattice point
    ImageMeta meta;

    std::size_t size() const { return values.size(); }
    double max_abs() const;
    double min() const;
    double max() const;
    std::size_t argmax() const;
};

// Divides by max |value|; throws FlatMapError when that maximum is below 1e-14.
ImageGrid normalize_max_abs(const ImageGrid& g);

// (1/2)(a / max|a| + b / max|b|); both grids must share a lattice.
ImageGrid combine_normalized(const ImageGrid& a, const ImageGrid& b, const std::string& functional);

struct ImagingOptions {
    int workers = 0;
    NeumannOptions neumann;
};

struct AdjointSample {
    cdouble value;
    CVec2 gradient;
};

// Adjoint fields v^(l)(z) = trapezoid over the boundary of u_scat(y; d_l) N(z, y)
// for every direction at one frequency. The trapezoid sum against the Fourier
// kernel of N is carried out once per order, so each z costs O(order * L).
class AdjointField {
public:
    static constexpr double kMaxRadius = 0.95;

    // Throws ConfigError when the boundary grid has fewer than 64 points.
    AdjointField(const BoundaryDataset& data, std::size_t k, const NeumannOptions& opts = {});

    std::size_t L() const { return coeff_.size(); }
    double omega() const { return nf_.omega(); }

    // Fills out[l] for all directions; requires |z| <= 0.95.
    void evaluate(const Vec2& z, std::vector<AdjointSample>& out) const;

private:
    NeumannFunction nf_;
    int nmax_ = 0;
    // coeff_[l][nmax + n] = (2 pi / N) sum_j u_scat(y_j; d_l) e^{-i n theta_j}, |n| <= nmax
    std::vector<std::vector<cdouble>> coeff_;
};

// Single-point convenience wrapper around AdjointField.
AdjointSample adjoint_field(const Vec2& z, const BoundaryDataset& data, std::size_t l, std::size_t k,
                            const NeumannOptions& opts = {});

struct TdComponents {
    ImageGrid eps;  // Re sum_l v^(l) conj(u_bac^(l))
    ImageGrid mu;   // Re sum_l grad v^(l) . conj(grad u_bac^(l))
};

TdComponents td_components(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                           const ImagingOptions& opts = {});
ImageGrid td_eps_map(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                     const ImagingOptions& opts = {});
ImageGrid td_mu_map(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                    const ImagingOptions& opts = {});

// Normalized single-frequency functional (1/2)(eps/max|eps| + mu/max|mu|).
ImageGrid etd_single(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data, std::size_t k,
                     const ImagingOptions& opts = {});

struct MultiFrequencyMaps {
    ImageGrid combined;  // (1/K) sum_k of the normalized single-frequency maps
    ImageGrid eps;       // (1/K) sum_k eps_k / max|eps_k|
    ImageGrid mu;        // (1/K) sum_k mu_k / max|mu_k|
};

MultiFrequencyMaps etd_multi_components(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data,
                                        const std::vector<std::size_t>& ks, const ImagingOptions& opts = {});
ImageGrid etd_multi(std::shared_ptr<const Lattice> lattice, const BoundaryDataset& data,
                    const std::vector<std::size_t>& ks, const ImagingOptions& opts = {});

// All frequency indices 0..K-1 of a dataset.
std::vector<std::size_t> all_frequencies(const BoundaryDataset& data);

}  // namespace mftd

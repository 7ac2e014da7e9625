#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mftd/forward.hpp"
#include "mftd/imaging.hpp"

namespace mftd {

struct TestVectorConfig {
    std::array<double, 3> c{1.0, 0.0, 0.0};  // weights of (1, d_x, d_y)

    void validate() const;
};

// w_l = (c . (1, d_l)) e^{i w d_l . x}, not normalized.
Eigen::VectorXcd test_vector(const Vec2& x, double omega, const std::vector<Vec2>& directions,
                             const TestVectorConfig& cfg = {});

// Largest M with s_M >= drop_tol * s_1, capped at L - 1 so a noise subspace
// remains. Throws EmptySignalError for an all-zero matrix.
int signal_space_dim(const MsrMatrix& msr, double drop_tol);

struct MusicOptions {
    TestVectorConfig test;
    double ceiling = 1e12;
    int workers = 0;
};

// 1 / |P w| for the unit test vector w, P the projector onto the complement
// of span{u_1..u_M}. Values are clamped to the ceiling and the map flagged.
// Throws EmptyNoiseSubspaceError when M >= L.
ImageGrid music_map(std::shared_ptr<const Lattice> lattice, const MsrMatrix& msr,
                    const std::vector<Vec2>& directions, int M, const MusicOptions& opts = {});

struct KirchhoffOptions {
    TestVectorConfig test;
    int workers = 0;
};

// |w^H A conj(w)| for the unit test vector. For A = s u v^H this is
// s |<w, u>| |<w, conj(v)>|, and for A = sum a_m a_m^T it peaks at the scatterers.
ImageGrid kirchhoff_map(std::shared_ptr<const Lattice> lattice, const MsrMatrix& msr,
                        const std::vector<Vec2>& directions, const KirchhoffOptions& opts = {});

// Sum over frequencies of the single-frequency Kirchhoff maps.
ImageGrid multi_kirchhoff_map(std::shared_ptr<const Lattice> lattice, const std::vector<MsrMatrix>& msrs,
                              const std::vector<Vec2>& directions, const KirchhoffOptions& opts = {});

}  // namespace mftd

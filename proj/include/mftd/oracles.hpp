#pragma once

#include <memory>
#include <vector>

#include "mftd/forward.hpp"
#include "mftd/geometry.hpp"
#include "mftd/imaging.hpp"

namespace mftd {

// Closed-form surrogates of the topological-derivative maps, evaluated by
// curve quadrature. Each sums over the given inclusions.

struct OracleOptions {
    int m_nodes = 200;
    int workers = 0;
};

// Re sum_l int (eps - eps0) e^{i w d_l.(x - z)}
ImageGrid closed_form_eps_map(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                         const IncidentSet& incident, std::size_t k, const OracleOptions& opts = {});

// Re sum_l int [lt d_l.t + ln d_l.n] e^{i w d_l.(x - z)}, with lt, ln the
// polarization eigenvalues. Odd in d_l, so it vanishes identically for
// direction sets closed under d -> -d.
ImageGrid closed_form_mu_map(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, std::size_t k, const OracleOptions& opts = {});

struct OraclePair {
    ImageGrid first;
    ImageGrid second;
};

// j0(xi1 s) cos(xi2 s) band kernel with s = d_l.(x - z), xi1 = (w_last - w_first)/2,
// xi2 = (w_last + w_first)/2. Throws DegenerateBandError when w_last <= w_first.
OraclePair oracle_E1_E2(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, std::size_t k_first, std::size_t k_last,
                        const OracleOptions& opts = {});

// 2 pi int (contrast) (Lambda(|x - z|; wK) - Lambda(|x - z|; w1)). The mu
// bracket carries a free direction; it is averaged over the incident set.
OraclePair oracle_E3_E4(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, double omega1, double omegaK, const OracleOptions& opts = {});

// int (contrast) 2 pi / |x - z|, skipping nodes closer than half the lattice
// spacing. The mu bracket is direction-averaged as for E4.
OraclePair oracle_E5_E6(std::shared_ptr<const Lattice> lattice, const std::vector<ThinInclusion>& inclusions,
                        const IncidentSet& incident, const OracleOptions& opts = {});

// Pearson correlation of two maps on the same lattice; NaN when either is constant.
double correlation(const ImageGrid& a, const ImageGrid& b);

}  // namespace mftd

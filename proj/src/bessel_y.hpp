#pragma once

#include <vector>

namespace mftd::detail {

// Y_0 .. Y_nmax at x > 0, seeded from the Neumann series for Y_0 and Y_1 in
// terms of the Miller J sequence and continued by forward recurrence, which
// is stable for Y.
std::vector<double> bessel_y_sequence(int nmax, double x);

}  // namespace mftd::detail

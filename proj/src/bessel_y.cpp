#include "bessel_y.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mftd/errors.hpp"
#include "mftd/specialfn.hpp"

namespace mftd::detail {

std::vector<double> bessel_y_sequence(int nmax, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_y_sequence: argument must be finite and > 0");
    if (nmax < 0) throw DomainError("bessel_y_sequence: negative order");

    // Enough J orders for the series tails to fall below double precision.
    const int jmax = 2 * (static_cast<int>(x) + 30) + 2;
    const auto j = bessel_j_sequence(jmax, x);
    const double logterm = std::log(0.5 * x) + std::numbers::egamma;

    // (pi/2) Y0 = (ln(x/2) + gamma) J0 - 2 sum_k (-1)^k J_2k / k
    // (pi/2) Y1 = -J0/x + (ln(x/2) + gamma) J1 + sum_k (-1)^k (J_{2k-1} - J_{2k+1}) / k
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= jmax; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sign * j[2 * k] / k;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    std::vector<double> y(static_cast<std::size_t>(std::max(nmax, 1)) + 1);
    y[0] = (2.0 / std::numbers::pi) * (logterm * j[0] - 2.0 * s0);
    y[1] = (2.0 / std::numbers::pi) * (-j[0] / x + logterm * j[1] + s1);
    for (int n = 1; n < nmax; ++n) y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
    y.resize(static_cast<std::size_t>(nmax) + 1);
    return y;
}

}  // namespace mftd::detail

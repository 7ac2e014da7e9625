#include "mftd/specialfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "mftd/errors.hpp"
#include "quadrature.hpp"

namespace mftd {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double x, const char* fn) {
    if (!std::isfinite(x)) throw DomainError(std::string(fn) + ": non-finite argument");
}

int miller_start(int nmax, double ax) {
    const double top = std::max(static_cast<double>(nmax), ax);
    int start = static_cast<int>(top) + 20 + static_cast<int>(std::sqrt(50.0 * (top + 1.0)));
    if (start % 2 != 0) ++start;
    return start;
}

// Above this magnitude the downward sweep rescales its past entries.
constexpr double kRescaleAt = 1e200;

}  // namespace

void SpecialFnConfig::validate() const {
    if (!(series_tol > 0.0 && series_tol <= 1e-6))
        throw ConfigError("series_tol must lie in (0, 1e-6], got " + std::to_string(series_tol));
    if (max_terms < 50) throw ConfigError("max_terms must be >= 50");
}

std::vector<double> bessel_j_sequence(int nmax, double x) {
    require_finite(x, "bessel_j_sequence");
    if (nmax < 0) throw DomainError("bessel_j_sequence: negative order");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const double ax = std::abs(x);
    const int start = miller_start(nmax, ax);

    // Downward recurrence J_{n-1} = (2n/x) J_n - J_{n+1} on an unnormalized
    // sequence, then normalize with J_0 + 2 sum J_{2k} = 1.
    std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
    f[start + 1] = 0.0;
    f[start] = 1e-300;
    double even_sum = 0.0;
    for (int n = start; n >= 1; --n) {
        f[n - 1] = (2.0 * n / ax) * f[n] - f[n + 1];
        if (std::abs(f[n - 1]) > kRescaleAt) {
            for (int m = n - 1; m <= start; ++m) f[m] /= kRescaleAt;
            even_sum /= kRescaleAt;
        }
        if ((n - 1) % 2 == 0 && n - 1 > 0) even_sum += f[n - 1];
    }
    const double norm = f[0] + 2.0 * even_sum;
    for (int n = 0; n <= nmax; ++n) {
        double v = f[n] / norm;
        if (x < 0.0 && (n % 2 != 0)) v = -v;
        out[n] = v;
    }
    return out;
}

std::vector<double> bessel_j_ratios(int nmax, double x) {
    require_finite(x, "bessel_j_ratios");
    std::vector<double> rho(static_cast<std::size_t>(std::max(nmax, 0)) + 1, 0.0);
    if (nmax < 1 || x == 0.0) return rho;
    const int start = miller_start(nmax, std::abs(x));
    double next = 0.0;  // rho_{n+1}
    for (int n = start; n >= 1; --n) {
        const double r = x / (2.0 * n - x * next);
        if (n <= nmax) rho[n] = r;
        next = r;
    }
    return rho;
}

double bessel_j(int n, double x) {
    require_finite(x, "bessel_j");
    if (n < 0) throw DomainError("bessel_j: order must be >= 0");
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    return bessel_j_sequence(n, x)[n];
}

double spherical_j0(double x) {
    require_finite(x, "spherical_j0");
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double struve_h(int n, double x, const SpecialFnConfig& cfg) {
    require_finite(x, "struve_h");
    if (n != 0 && n != 1) throw DomainError("struve_h: only orders 0 and 1 are supported");
    if (x < 0.0) throw DomainError("struve_h: argument must be >= 0");
    if (x == 0.0) return 0.0;

    if (x <= 16.0) {
        // H_n(x) = (x/2)^{n+1} sum_k (-1)^k (x/2)^{2k} / (Gamma(k+3/2) Gamma(k+n+3/2))
        const double q = 0.25 * x * x;
        double term = (n == 0) ? 2.0 * x / kPi : 2.0 * x * x / (3.0 * kPi);
        double sum = term;
        for (int k = 0; k < cfg.max_terms; ++k) {
            const double a = k + 1.5;
            const double b = k + n + 1.5;
            term *= -q / (a * b);
            sum += term;
            if (std::abs(term) <= cfg.series_tol * std::abs(sum) && k > q) break;
        }
        return sum;
    }

    // Integral representations on [0, pi/2], split into panels short enough
    // that the oscillation of sin(x cos theta) is resolved by each panel.
    const int panels = static_cast<int>(std::ceil(x / 4.0)) + 2;
    const double width = 0.5 * kPi / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = p * width;
        acc += detail::gauss_legendre_16(a, a + width, [&](double th) {
            const double s = std::sin(x * std::cos(th));
            if (n == 0) return s;
            const double st = std::sin(th);
            return s * st * st;
        });
    }
    return (n == 0) ? (2.0 / kPi) * acc : (2.0 * x / kPi) * acc;
}

double lambda_fn(double t, double omega, const SpecialFnConfig& cfg) {
    require_finite(t, "lambda_fn");
    require_finite(omega, "lambda_fn");
    if (t < 0.0) throw DomainError("lambda_fn: distance must be >= 0");
    if (!(omega > 0.0)) throw DomainError("lambda_fn: frequency must be > 0");
    if (t == 0.0) return omega;
    const double x = omega * t;
    const auto j = bessel_j_sequence(1, x);
    const double h0 = struve_h(0, x, cfg);
    const double h1 = struve_h(1, x, cfg);
    return omega * j[0] + 0.5 * omega * kPi * (j[1] * h0 - j[0] * h1);
}

}  // namespace mftd

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bessel_y.hpp"
#include "mftd/errors.hpp"
#include "mftd/forward.hpp"
#include "mftd/specialfn.hpp"

namespace mftd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOnCircle = 1e-12;
constexpr double kOutsideSlack = 1e-3;  // continuation just outside |x| = 1

double eps_n(int n) { return n == 0 ? 1.0 : 2.0; }

// Convergence bookkeeping shared by both expansions: stop once two
// consecutive orders past the minimum contribute below tol relative to the
// largest coefficient seen.
class TailMonitor {
public:
    TailMonitor(double tol, double omega, int min_order) : tol_(tol), omega_(omega), min_order_(min_order) {}

    bool done(int n, double v, double dr, double da) {
        const double mag = std::max({std::abs(v), std::abs(dr) / omega_, std::abs(da) / omega_});
        scale_ = std::max(scale_, mag);
        if (mag <= tol_ * scale_) {
            ++quiet_;
        } else {
            quiet_ = 0;
        }
        return n >= min_order_ && quiet_ >= 2;
    }

private:
    double tol_;
    double omega_;
    int min_order_;
    double scale_ = 0.0;
    int quiet_ = 0;
};

}  // namespace

void NeumannOptions::validate() const {
    if (trunc < 0) throw ConfigError("Neumann trunc must be >= 0");
    if (!(series_tol > 0.0 && series_tol < 1e-3)) throw ConfigError("Neumann series_tol must lie in (0, 1e-3)");
    if (max_order < 64) throw ConfigError("Neumann max_order must be >= 64");
    if (!(resonance_tol > 0.0)) throw ConfigError("resonance_tol must be > 0");
}

std::optional<ResonanceHit> find_resonance(double omega, double tol) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("find_resonance: frequency must be > 0");
    const int top = static_cast<int>(std::floor(omega));
    const auto j = bessel_j_sequence(top + 1, omega);
    std::optional<ResonanceHit> worst;
    for (int n = 0; n <= top; ++n) {
        const double jp = (n == 0) ? -j[1] : 0.5 * (j[n - 1] - j[n + 1]);
        if (std::abs(jp) < tol && (!worst || std::abs(jp) < std::abs(worst->derivative)))
            worst = ResonanceHit{n, omega, jp};
    }
    return worst;
}

struct NeumannFunction::ScaledJ {
    std::vector<double> direct;  // J_n(omega r), n <= n0 + 1
    std::vector<double> kappa;   // J_n(omega r) / J_n(omega), n >= n0
};

NeumannFunction::NeumannFunction(double omega, NeumannOptions opts) : omega_(omega), opts_(opts) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("Neumann function: frequency must be > 0");
    opts_.validate();
    if (auto hit = find_resonance(omega, opts_.resonance_tol)) {
        std::ostringstream msg;
        msg << "omega = " << omega << " is near a Neumann eigenvalue of the disk: |J_" << hit->order
            << "'(omega)| = " << std::abs(hit->derivative) << " < " << opts_.resonance_tol;
        throw ResonanceError(msg.str());
    }

    n0_ = static_cast<int>(std::floor(omega)) + 2;
    jw_ = bessel_j_sequence(n0_ + 1, omega);
    const auto yw = detail::bessel_y_sequence(n0_ + 1, omega);
    jpw_.resize(n0_ + 1);
    ypw_.resize(n0_ + 1);
    for (int n = 0; n <= n0_; ++n) {
        jpw_[n] = (n == 0) ? -jw_[1] : 0.5 * (jw_[n - 1] - jw_[n + 1]);
        ypw_[n] = (n == 0) ? -yw[1] : 0.5 * (yw[n - 1] - yw[n + 1]);
    }

    const int top = opts_.max_order + 2;
    rho_ = bessel_j_ratios(top, omega);
    beta_.assign(top + 1, 0.0);
    q_.assign(top + 1, 0.0);
    // P_n = J_n Y_n is bounded for n > omega; sigma_n = Y_n / Y_{n-1} grows by forward recurrence.
    double p_prev = jw_[n0_] * yw[n0_];
    double sigma = yw[n0_ + 1] / yw[n0_];
    for (int n = n0_ + 1; n <= top; ++n) {
        if (n > n0_ + 1) sigma = 2.0 * (n - 1) / omega - 1.0 / sigma;
        const double p = p_prev * rho_[n] * sigma;
        beta_[n] = 1.0 / rho_[n] - n / omega;
        // J_n Y_n' = J_n Y_{n-1} - (n/omega) J_n Y_n = rho_n P_{n-1} - (n/omega) P_n
        q_[n] = (rho_[n] * p_prev - (n / omega) * p) / beta_[n];
        p_prev = p;
    }
}

int NeumannFunction::default_trunc() const {
    return std::max(30, static_cast<int>(std::ceil(2.0 * omega_)) + 20);
}

int NeumannFunction::initial_order(double rr) const {
    const int base = std::max(opts_.trunc > 0 ? opts_.trunc : default_trunc(), n0_ + 4);
    if (rr <= 0.0) return base;
    const double decay = std::log(opts_.series_tol) / std::log(rr);
    return std::min(opts_.max_order, std::max(base, n0_ + static_cast<int>(std::ceil(decay)) + 16));
}

NeumannFunction::ScaledJ NeumannFunction::scaled_j(double r, int nmax) const {
    ScaledJ s;
    const double x = omega_ * r;
    s.direct = bessel_j_sequence(n0_ + 1, x);
    s.kappa.assign(static_cast<std::size_t>(nmax) + 2, 0.0);
    const auto rho_x = bessel_j_ratios(nmax + 1, x);
    s.kappa[n0_] = s.direct[n0_] / jw_[n0_];
    s.kappa[n0_ + 1] = s.direct[n0_ + 1] / jw_[n0_ + 1];
    for (int n = n0_ + 2; n <= nmax + 1; ++n) s.kappa[n] = s.kappa[n - 1] * rho_x[n] / rho_[n];
    return s;
}

RadialExpansion NeumannFunction::boundary_expansion(double r) const {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("Neumann boundary expansion needs 0 <= |x| < 1");
    const double w = omega_;
    for (int nmax = initial_order(r);; nmax = std::min(opts_.max_order, 2 * nmax)) {
        const ScaledJ s = scaled_j(r, nmax);
        RadialExpansion e;
        e.r = r;
        TailMonitor tail(opts_.series_tol, w, opts_.trunc > 0 ? opts_.trunc : default_trunc());
        for (int n = 0; n <= nmax; ++n) {
            double v = 0.0, dr = 0.0, da = 0.0;
            if (n <= n0_) {
                const double base = eps_n(n) / (2.0 * kPi * w * jpw_[n]);
                const auto& j = s.direct;
                v = base * j[n];
                if (n == 0) {
                    dr = -base * w * j[1];
                } else {
                    dr = base * w * 0.5 * (j[n - 1] - j[n + 1]);
                    da = base * w * 0.5 * (j[n - 1] + j[n + 1]);
                }
            } else {
                // Every quantity is divided by J_n(omega), which may underflow.
                const double base = eps_n(n) / (2.0 * kPi * w * beta_[n]);
                const double lower = s.kappa[n - 1] / rho_[n];
                const double upper = s.kappa[n + 1] * rho_[n + 1];
                v = base * s.kappa[n];
                dr = base * w * 0.5 * (lower - upper);
                da = base * w * 0.5 * (lower + upper);
            }
            e.value.push_back(v);
            e.radial.push_back(dr);
            e.angular.push_back(da);
            if (tail.done(n, v, dr, da)) return e;
        }
        if (nmax >= opts_.max_order) {
            throw DomainError("Neumann series did not converge within max_order = " +
                              std::to_string(opts_.max_order) + " at |x| = " + std::to_string(r));
        }
    }
}

RadialExpansion NeumannFunction::interior_expansion(double r1, double r2) const {
    const double w = omega_;
    for (int nmax = initial_order(r1 * r2);; nmax = std::min(opts_.max_order, 2 * nmax)) {
        const ScaledJ s1 = scaled_j(r1, nmax);
        const ScaledJ s2 = scaled_j(r2, nmax);
        RadialExpansion e;
        e.r = r1;
        TailMonitor tail(opts_.series_tol, w, opts_.trunc > 0 ? opts_.trunc : default_trunc());
        for (int n = 0; n <= nmax; ++n) {
            double v = 0.0, dr = 0.0, da = 0.0;
            if (n <= n0_) {
                const double c = 0.25 * eps_n(n) * ypw_[n] / jpw_[n] * s2.direct[n];
                const auto& j = s1.direct;
                v = c * j[n];
                if (n == 0) {
                    dr = -c * w * j[1];
                } else {
                    dr = c * w * 0.5 * (j[n - 1] - j[n + 1]);
                    da = c * w * 0.5 * (j[n - 1] + j[n + 1]);
                }
            } else {
                const double c = 0.25 * eps_n(n) * q_[n] * s2.kappa[n];
                const double lower = s1.kappa[n - 1] / rho_[n];
                const double upper = s1.kappa[n + 1] * rho_[n + 1];
                v = c * s1.kappa[n];
                dr = c * w * 0.5 * (lower - upper);
                da = c * w * 0.5 * (lower + upper);
            }
            e.value.push_back(v);
            e.radial.push_back(dr);
            e.angular.push_back(da);
            if (tail.done(n, v, dr, da)) return e;
        }
        if (nmax >= opts_.max_order) {
            throw DomainError("Neumann series did not converge within max_order = " +
                              std::to_string(opts_.max_order));
        }
    }
}

KernelSample evaluate(const RadialExpansion& e, double theta_x, double theta_y) {
    const double phi = theta_x - theta_y;
    const std::complex<double> step(std::cos(phi), std::sin(phi));
    std::complex<double> z(1.0, 0.0);
    double v = 0.0, dr = 0.0, da = 0.0;
    for (std::size_t n = 0; n < e.value.size(); ++n) {
        v += e.value[n] * z.real();
        dr += e.radial[n] * z.real();
        da -= e.angular[n] * z.imag();
        z *= step;
    }
    const Vec2 er{std::cos(theta_x), std::sin(theta_x)};
    return {v, dr * er + da * rotate90(er)};
}

namespace {

struct Placement {
    double rx, ry, tx, ty;
    bool y_on_circle;
    bool x_on_circle;
};

Placement place(const Vec2& x, const Vec2& y) {
    if (x == y) throw SingularityError("Neumann function evaluated at x = y");
    Placement p{norm(x), norm(y), 0.0, 0.0, false, false};
    if (p.ry > 1.0 + kOnCircle || p.rx > 1.0 + kOutsideSlack)
        throw DomainError("Neumann function arguments must lie in the closed unit disk");
    p.tx = p.rx > 0.0 ? std::atan2(x.y, x.x) : 0.0;
    p.ty = p.ry > 0.0 ? std::atan2(y.y, y.x) : 0.0;
    p.y_on_circle = std::abs(p.ry - 1.0) <= kOnCircle;
    p.x_on_circle = std::abs(p.rx - 1.0) <= kOnCircle;
    if (p.y_on_circle && p.rx >= 1.0 - kOnCircle)
        throw DomainError("Neumann function needs at least one argument strictly inside the disk");
    if (!p.y_on_circle && p.rx * p.ry >= 1.0 - 1e-9)
        throw DomainError("Neumann series diverges for |x| |y| >= 1");
    return p;
}

}  // namespace

double NeumannFunction::value(const Vec2& x, const Vec2& y) const {
    const Placement p = place(x, y);
    if (p.y_on_circle) return evaluate(boundary_expansion(p.rx), p.tx, p.ty).value;
    if (p.x_on_circle) return evaluate(boundary_expansion(p.ry), p.ty, p.tx).value;
    const double rho = distance(x, y);
    const double y0 = detail::bessel_y_sequence(0, omega_ * rho)[0];
    return -0.25 * y0 + evaluate(interior_expansion(p.rx, p.ry), p.tx, p.ty).value;
}

Vec2 NeumannFunction::gradient_x(const Vec2& x, const Vec2& y) const {
    const Placement p = place(x, y);
    if (p.y_on_circle) return evaluate(boundary_expansion(p.rx), p.tx, p.ty).gradient;
    const double rho = distance(x, y);
    const double y1 = detail::bessel_y_sequence(1, omega_ * rho)[1];
    // grad_x of -(1/4) Y0(omega |x - y|) = (omega / 4) Y1 (x - y) / |x - y|
    const Vec2 free = (0.25 * omega_ * y1 / rho) * (x - y);
    return free + evaluate(interior_expansion(p.rx, p.ry), p.tx, p.ty).gradient;
}

}  // namespace mftd

#pragma once

#include <vector>

namespace mftd {

// Truncation controls for the power series used below. Every function is pure;
// the config only bounds how far a series is summed.
struct SpecialFnConfig {
    double series_tol = 1e-16;  // relative truncation tolerance, in (0, 1e-6]
    int max_terms = 500;        // hard cap on series terms, >= 50

    void validate() const;
};

// Cylindrical Bessel function of the first kind J_n(x), integer n >= 0.
double bessel_j(int n, double x);

// J_0(x) .. J_nmax(x) in one backward (Miller) recurrence sweep. Entries whose
// magnitude is below the double range come back as 0.
std::vector<double> bessel_j_sequence(int nmax, double x);

// Ratios J_n(x) / J_{n-1}(x) for n = 1..nmax (index 0 unused), computed by the
// downward continued fraction. Remains accurate where J_n itself underflows.
std::vector<double> bessel_j_ratios(int nmax, double x);

// Spherical Bessel function j_0(x) = sin(x)/x with j_0(0) = 1.
double spherical_j0(double x);

// Struve function H_n(x) for n in {0, 1} and x >= 0.
double struve_h(int n, double x, const SpecialFnConfig& cfg = {});

// Antiderivative kernel Lambda(t; omega) = omega J0(omega t)
//   + (omega pi / 2) (J1(omega t) H0(omega t) - J0(omega t) H1(omega t)),
// so that d/d(omega) Lambda(t; omega) = J0(omega t) and Lambda(0; omega) = omega.
double lambda_fn(double t, double omega, const SpecialFnConfig& cfg = {});

}  // namespace mftd

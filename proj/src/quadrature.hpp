#pragma once

#include <array>

namespace mftd::detail {

// Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 4> kGL4Nodes = {
    -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGL4Weights = {
    0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

inline constexpr std::array<double, 8> kGL16HalfNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGL16HalfWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss_legendre_16(double a, double b, F&& f) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < kGL16HalfNodes.size(); ++i) {
        const double dx = half * kGL16HalfNodes[i];
        acc += kGL16HalfWeights[i] * (f(mid - dx) + f(mid + dx));
    }
    return acc * half;
}

}  // namespace mftd::detail

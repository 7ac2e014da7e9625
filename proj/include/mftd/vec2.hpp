#pragma once

#include <cmath>
#include <complex>

namespace mftd {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Counter-clockwise quarter turn.
constexpr Vec2 rotate90(const Vec2& a) { return {-a.y, a.x}; }

// Complex-valued 2-vector, used for field gradients.
struct CVec2 {
    std::complex<double> x;
    std::complex<double> y;
};

inline std::complex<double> dot(const CVec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

}  // namespace mftd

// Small planar linear algebra used throughout.
#pragma once

#include <cmath>
#include <complex>
#include <utility>

namespace duffing {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

// Row-major 2x2 matrix.
struct Mat2 {
    double a11{1.0}, a12{0.0};
    double a21{0.0}, a22{1.0};

    static Mat2 identity() { return {}; }

    Vec2 operator*(const Vec2& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
};

inline double det(const Mat2& m) { return m.a11 * m.a22 - m.a12 * m.a21; }
inline double trace(const Mat2& m) { return m.a11 + m.a22; }

inline double frobenius_norm(const Mat2& m) {
    return std::sqrt(m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22);
}

// Eigenvalues of a real 2x2 matrix as a complex pair.
inline std::pair<std::complex<double>, std::complex<double>> eigenvalues(const Mat2& m) {
    const double tr = trace(m);
    const double dt = det(m);
    const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * dt, 0.0));
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

// Wrap an angle difference into (-pi, pi].
inline double wrap_angle(double d) {
    double r = std::remainder(d, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

}  // namespace duffing

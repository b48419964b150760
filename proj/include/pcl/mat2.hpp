#pragma once

#include <cmath>
#include <complex>

namespace pcl {

using cplx = std::complex<double>;

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Column 2-vector over the complex numbers.
struct Vec2 {
    cplx v1{}, v2{};

    Vec2& operator+=(const Vec2& o) { v1 += o.v1; v2 += o.v2; return *this; }
    friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend Vec2 operator*(cplx s, const Vec2& a) { return {s * a.v1, s * a.v2}; }
    friend Vec2 operator*(double s, const Vec2& a) { return {s * a.v1, s * a.v2}; }
};

/// 2x2 complex matrix, row-major entries (a b; c d).
struct Mat2 {
    cplx a{}, b{}, c{}, d{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    cplx trace() const { return a + d; }
    cplx det() const { return a * d - b * c; }

    Mat2& operator+=(const Mat2& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        a -= o.a; b -= o.b; c -= o.c; d -= o.d;
        return *this;
    }
    friend Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
    friend Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }
    friend Mat2 operator*(cplx s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
    friend Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Vec2 operator*(const Mat2& m, const Vec2& v) {
        return {m.a * v.v1 + m.b * v.v2, m.c * v.v1 + m.d * v.v2};
    }
};

inline Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }

inline double frobenius_norm(const Mat2& m) {
    return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

} // namespace pcl

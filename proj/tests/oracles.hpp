#pragma once

// Test-side oracles, kept independent of the implementation paths they check:
// fixed-range theta summation in extended precision, the direct Weierstrass
// lattice sum, and finite-difference derivative helpers.

#include <complex>
#include <functional>

#include "pcl/mat2.hpp"

namespace oracle {

using cplxl = std::complex<long double>;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Direct summation of the defining series over |k| <= 50, long double.
// No argument reduction, no adaptive truncation.
inline cplxl theta(int a, cplxl z, cplxl tau, int order = 0) {
    const cplxl I(0.0L, 1.0L);
    cplxl sum = 0.0L;
    for (int k = -50; k <= 50; ++k) {
        long double j;
        cplxl zeff;
        switch (((a % 4) + 4) % 4) {
            case 1: j = k + 0.5L; zeff = z + 0.5L; break;
            case 2: j = k + 0.5L; zeff = z; break;
            case 3: j = (long double)k; zeff = z; break;
            default: j = (long double)k; zeff = z + 0.5L; break;
        }
        cplxl term = std::exp(kPiL * I * tau * j * j + 2.0L * kPiL * I * zeff * j);
        for (int m = 0; m < order; ++m) term *= 2.0L * kPiL * I * j;
        sum += term;
    }
    if ((((a % 4) + 4) % 4) == 1) sum = -sum;
    return sum;
}

// Weierstrass lattice sum: sum' [(z-w)^-2 - w^-2] + z^-2 over |m|,|n| <= N.
// Truncation error is O(1/N^2); with N = 60 roughly 3e-5 at |z| ~ 0.3.
inline pcl::cplx wp_lattice_sum(pcl::cplx z, pcl::cplx tau, int N = 60) {
    cplxl zz(z.real(), z.imag()), tt(tau.real(), tau.imag());
    cplxl s = 1.0L / (zz * zz);
    for (int m = -N; m <= N; ++m) {
        for (int n = -N; n <= N; ++n) {
            if (m == 0 && n == 0) continue;
            cplxl w = cplxl(m) + cplxl(n) * tt;
            s += 1.0L / ((zz - w) * (zz - w)) - 1.0L / (w * w);
        }
    }
    return {double(s.real()), double(s.imag())};
}

// Central differences of a complex-valued function of a complex parameter,
// stepped along the real direction (all functions under test are holomorphic).
inline pcl::cplx cdiff(const std::function<pcl::cplx(pcl::cplx)>& f, pcl::cplx at, double h) {
    return (f(at + h) - f(at - h)) / (2.0 * h);
}

inline pcl::cplx cdiff2(const std::function<pcl::cplx(pcl::cplx)>& f, pcl::cplx at, double h) {
    return (f(at + h) - 2.0 * f(at) + f(at - h)) / (h * h);
}

// One Richardson step on central differences: O(h^4) accurate.
inline pcl::cplx cdiff_richardson(const std::function<pcl::cplx(pcl::cplx)>& f, pcl::cplx at,
                                  double h) {
    return (4.0 * cdiff(f, at, h / 2) - cdiff(f, at, h)) / 3.0;
}

} // namespace oracle

#include "pcl/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace pcl {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI{0.0, 1.0};
constexpr double kPoleGuard = 1e-8;
constexpr int kSeriesCap = 200;

// One term of the theta series: exp(pi i tau j^2 + 2 pi i zeff j) * (2 pi i j)^order.
cplx series_term(cplx tau, cplx zeff, double j, int order) {
    cplx e = std::exp(kPi * kI * tau * j * j + 2.0 * kPi * kI * zeff * j);
    if (order > 0) {
        cplx f = 2.0 * kPi * kI * j;
        for (int m = 0; m < order; ++m) e *= f;
    }
    return e;
}

// Core series for theta_a and its term-wise z-derivatives.
//   theta1: -sum over j in Z+1/2 of exp(pi i tau j^2 + 2 pi i (z+1/2) j)
//   theta2:  sum over j in Z+1/2,  phase z
//   theta3:  sum over j in Z,      phase z
//   theta0:  sum over j in Z,      phase z+1/2
cplx theta_series(int a, cplx z, cplx tau, int order) {
    if (!is_finite(z)) throw std::domain_error("theta: non-finite argument");

    // Reduce Re z to [-1/2, 1/2). theta1/theta2 pick up (-1)^m, theta3/theta0 are 1-periodic.
    double m = std::floor(z.real() + 0.5);
    z -= m;
    double prefactor = 1.0;
    if ((a == 1 || a == 2) && std::fmod(std::abs(m), 2.0) == 1.0) prefactor = -1.0;
    if (a == 1) prefactor = -prefactor;

    const bool half = (a == 1 || a == 2);
    const cplx zeff = (a == 1 || a == 0) ? z + 0.5 : z;

    cplx sum = 0.0;
    double scale = 0.0;
    int quiet = 0;
    for (int k = 0; k <= kSeriesCap; ++k) {
        double tmax = 0.0;
        if (half) {
            cplx tp = series_term(tau, zeff, k + 0.5, order);
            cplx tm = series_term(tau, zeff, -k - 0.5, order);
            sum += tp + tm;
            tmax = std::max(std::abs(tp), std::abs(tm));
        } else if (k == 0) {
            cplx t0 = series_term(tau, zeff, 0.0, order);
            sum += t0;
            tmax = std::abs(t0);
        } else {
            cplx tp = series_term(tau, zeff, double(k), order);
            cplx tm = series_term(tau, zeff, double(-k), order);
            sum += tp + tm;
            tmax = std::max(std::abs(tp), std::abs(tm));
        }
        scale = std::max({scale, std::abs(sum), tmax});
        quiet = (k >= 2 && tmax < 1e-16 * scale) ? quiet + 1 : 0;
        if (quiet >= 2) break;
    }
    return prefactor * sum;
}

} // namespace

double lattice_distance(cplx z, const ModularParam& tau) {
    cplx t = tau.tau();
    double n = std::round(z.imag() / t.imag());
    double m = std::round((z - n * t).real());
    return std::abs(z - m - n * t);
}

cplx theta(ThetaIndex a, cplx z, const ModularParam& tau) {
    return theta_series(a.a, z, tau.tau(), 0);
}

cplx theta_dz(ThetaIndex a, cplx z, const ModularParam& tau, int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("theta_dz: order must be in {1,2,3}");
    return theta_series(a.a, z, tau.tau(), order);
}

cplx eta_const(const ModularParam& tau) {
    return -theta_dz(1, 0.0, tau, 3) / (6.0 * theta_dz(1, 0.0, tau, 1));
}

cplx wp(cplx z, const ModularParam& tau) {
    if (lattice_distance(z, tau) < kPoleGuard)
        throw pole_error("wp: argument too close to the period lattice");
    cplx t1 = theta(1, z, tau);
    cplx t1p = theta_dz(1, z, tau, 1);
    cplx t1pp = theta_dz(1, z, tau, 2);
    cplx logdd = t1pp / t1 - (t1p / t1) * (t1p / t1);
    return -logdd - 2.0 * eta_const(tau);
}

cplx wp_prime(cplx z, const ModularParam& tau) {
    if (lattice_distance(z, tau) < kPoleGuard)
        throw pole_error("wp_prime: argument too close to the period lattice");
    cplx t1p0 = theta_dz(1, 0.0, tau, 1);
    cplx t1 = theta(1, z, tau);
    return -2.0 * t1p0 * t1p0 * t1p0 /
           (theta(2, 0.0, tau) * theta(3, 0.0, tau) * theta(0, 0.0, tau)) *
           theta(2, z, tau) * theta(3, z, tau) * theta(0, z, tau) / (t1 * t1 * t1);
}

cplx wp_second(cplx z, const ModularParam& tau) {
    EllipticConstants ec = e_values(tau);
    cplx p = wp(z, tau);
    return 6.0 * p * p - (ec.e1 * ec.e1 + ec.e2 * ec.e2 + ec.e3 * ec.e3);
}

EllipticConstants e_values(const ModularParam& tau) {
    // e_k = P(omega_k) = -theta_{k+1}''(0)/theta_{k+1}(0) - 2 eta, index mod 4.
    cplx eta = eta_const(tau);
    auto ek = [&](int idx) {
        return -theta_dz(idx, 0.0, tau, 2) / theta(idx, 0.0, tau) - 2.0 * eta;
    };
    return {eta, ek(2), ek(3), ek(0)};
}

cplx eisenstein_E1(cplx z, const ModularParam& tau) {
    if (lattice_distance(z, tau) < kPoleGuard)
        throw pole_error("E1: argument too close to the period lattice");
    return theta_dz(1, z, tau, 1) / theta(1, z, tau);
}

cplx eisenstein_E2(cplx z, const ModularParam& tau) {
    return wp(z, tau) + 2.0 * eta_const(tau);
}

cplx phi(cplx u, cplx z, const ModularParam& tau) {
    if (lattice_distance(u, tau) < kPoleGuard || lattice_distance(z, tau) < kPoleGuard)
        throw pole_error("Phi: argument too close to the period lattice");
    return theta(1, u + z, tau) * theta_dz(1, 0.0, tau, 1) /
           (theta(1, u, tau) * theta(1, z, tau));
}

cplx dtau_phi(cplx u, cplx z, const ModularParam& tau) {
    const cplx kappa = 1.0 / (2.0 * kPi * kI);
    cplx e_zu = eisenstein_E1(z + u, tau);
    cplx dzdu = phi(u, z, tau) * ((e_zu - eisenstein_E1(u, tau)) * (e_zu - eisenstein_E1(z, tau)) -
                                  eisenstein_E2(z + u, tau));
    return kappa * dzdu;
}

cplx dtau_E1(cplx z, const ModularParam& tau) {
    const cplx kappa = 1.0 / (2.0 * kPi * kI);
    // dz(E1^2 - P) = -2 E1 E2 - P'
    return kappa / 2.0 *
           (-2.0 * eisenstein_E1(z, tau) * eisenstein_E2(z, tau) - wp_prime(z, tau));
}

cplx dtau_E2(cplx z, const ModularParam& tau) {
    const cplx kappa = 1.0 / (2.0 * kPi * kI);
    cplx e2 = eisenstein_E2(z, tau);
    return kappa * (eisenstein_E1(z, tau) * wp_prime(z, tau) - e2 * e2 +
                    0.5 * wp_second(z, tau));
}

cplx dtau_X(cplx z, const ModularParam& tau) {
    const cplx kappa = 1.0 / (2.0 * kPi * kI);
    EllipticConstants ec = e_values(tau);
    return kappa * wp_prime(z, tau) / (ec.e2 - ec.e1) * theta_dz(0, z, tau, 1) /
           theta(0, z, tau);
}

cplx phi_j(int j, cplx z, const ModularParam& tau) {
    if (j < 1 || j > 3) throw std::invalid_argument("phi_j: j must be in {1,2,3}");
    HalfPeriods hp = half_periods(tau);
    cplx wj = (j == 1) ? hp.w1 : (j == 2) ? hp.w2 : hp.w3;
    double dtau_wj = (j == 1) ? 0.0 : 0.5; // dtau omega_j
    return std::exp(2.0 * kPi * kI * z * dtau_wj) * phi(z, wj, tau);
}

} // namespace pcl

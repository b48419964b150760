#pragma once

#include <complex>
#include <stdexcept>

#include "pcl/mat2.hpp"

namespace pcl {

/// Raised when an evaluation point is too close to a lattice point where the
/// requested function has a pole. Downstream residual checks must not absorb
/// near-pole blowup silently, hence a hard error instead of a huge value.
struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Modular parameter tau of the elliptic layer. Im(tau) > 0 strictly.
/// The time variable of the sixth equation enters through tau = 2*pi*i*t.
class ModularParam {
public:
    explicit ModularParam(cplx tau) : tau_(tau) {
        if (!is_finite(tau) || !(tau.imag() > 0.0))
            throw std::domain_error("ModularParam: Im(tau) must be strictly positive");
    }
    cplx tau() const { return tau_; }
    double im() const { return tau_.imag(); }

private:
    cplx tau_;
};

/// Theta-function label, understood modulo 4 (theta_a == theta_{a+4}).
struct ThetaIndex {
    int a;
    ThetaIndex(int v) : a(((v % 4) + 4) % 4) {}
};

/// Half-periods of the lattice spanned by 1 and tau.
struct HalfPeriods {
    cplx w0, w1, w2, w3;
};

inline HalfPeriods half_periods(const ModularParam& tau) {
    return {cplx(0.0), cplx(0.5), 0.5 * (1.0 + tau.tau()), 0.5 * tau.tau()};
}

/// The constant eta = -theta1'''(0)/(6 theta1'(0)) together with the values
/// e_k of the Weierstrass function at the half-periods.
struct EllipticConstants {
    cplx eta;
    cplx e1, e2, e3;
};

/// Distance from z to the nearest point of the period lattice Z + Z*tau.
double lattice_distance(cplx z, const ModularParam& tau);

/// Jacobi theta-function theta_a(z|tau) by truncated q-series. Terms are
/// added in pairs of increasing |k| until the last pair falls below 1e-16
/// of the accumulated scale; the summation index is capped at |k| <= 200.
/// The argument is reduced to Re z in [-1/2, 1/2) first.
cplx theta(ThetaIndex a, cplx z, const ModularParam& tau);

/// Term-wise z-derivative of the theta series, order in {1,2,3}.
cplx theta_dz(ThetaIndex a, cplx z, const ModularParam& tau, int order);

/// eta = -theta1'''(0) / (6 theta1'(0)).
cplx eta_const(const ModularParam& tau);

/// Weierstrass P-function, P(z) = -dz^2 log theta1(z) - 2 eta.
cplx wp(cplx z, const ModularParam& tau);

/// P'(z) through the theta-quotient representation.
cplx wp_prime(cplx z, const ModularParam& tau);

/// P''(z) = 6 P(z)^2 - (e1^2 + e2^2 + e3^2).
cplx wp_second(cplx z, const ModularParam& tau);

/// e_k = P(omega_k) evaluated through theta-constants, plus eta.
EllipticConstants e_values(const ModularParam& tau);

/// Eisenstein functions E1 = dz log theta1, E2 = -dz E1 = P + 2 eta.
cplx eisenstein_E1(cplx z, const ModularParam& tau);
cplx eisenstein_E2(cplx z, const ModularParam& tau);

/// Phi(u,z) = theta1(u+z) theta1'(0) / (theta1(u) theta1(z)).
cplx phi(cplx u, cplx z, const ModularParam& tau);

/// phi_j(z) = exp(2 pi i z dtau(omega_j)) Phi(z, omega_j), j in {1,2,3};
/// phi_j^2(z) = P(z) - e_j.
cplx phi_j(int j, cplx z, const ModularParam& tau);

/// Analytic tau-derivatives (heat-equation identities), with the heat
/// coefficient kappa = 1/(2 pi i):
///   dtau Phi = kappa dz du Phi
///   dtau E1  = kappa/2 dz (E1^2 - P)
///   dtau E2  = kappa (E1 P' - E2^2 + P''/2)
///   dtau X   = kappa dz X dz log theta0,  X = (P - e1)/(e2 - e1)
cplx dtau_phi(cplx u, cplx z, const ModularParam& tau);
cplx dtau_E1(cplx z, const ModularParam& tau);
cplx dtau_E2(cplx z, const ModularParam& tau);
cplx dtau_X(cplx z, const ModularParam& tau);

} // namespace pcl

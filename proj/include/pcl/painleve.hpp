#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pcl/elliptic.hpp"
#include "pcl/mat2.hpp"

namespace pcl {

enum class PainleveKind { P1, P2, P3Truncated, P3, P4, P5, P6 };

const char* kind_name(PainleveKind k);
PainleveKind kind_from_name(const std::string& name);

struct P1Params {};

struct P2Params {
    cplx alpha;
};

/// Truncated third equation: the mu = 0 case with rho normalized away.
struct P3TruncParams {
    cplx nu;
};

/// Third equation in the (nu, mu, rho) normalization. The equivalent
/// (theta, lambda, chi) tuple used by the general linear problem exists
/// for mu^2 = 1/4 and is exposed through theta_lambda_chi().
struct P3Params {
    cplx nu, mu, rho;
};

struct P4Params {
    cplx alpha, beta;
};

/// Fifth equation. delta = -1/2 is required by the hyperbolic linear
/// problem; sigma, zeta^2 and xi^2 + 2 xi sigma are derived from
/// (alpha, beta, gamma) in that case.
struct P5Params {
    cplx alpha, beta, gamma, delta;
    cplx xi, zeta, sigma;
    bool jm_compatible = false; // delta == -1/2
};

/// Sixth equation: standard parameters, the nu_k of the Newton form and
/// the xi_k of the rational linear problem, kept consistent.
struct P6Params {
    cplx alpha, beta, gamma, delta;
    cplx nu0, nu1, nu2, nu3;
    cplx xi0, xi1, xi2, xi3, xi; // xi = xi0+xi1+xi2+xi3
};

using ParamSet = std::variant<P1Params, P2Params, P3TruncParams, P3Params, P4Params,
                              P5Params, P6Params>;

PainleveKind kind_of(const ParamSet& p);

ParamSet params_p1();
ParamSet params_p2(cplx alpha);
ParamSet params_p3_truncated(cplx nu);
ParamSet params_p3(cplx nu, cplx mu, cplx rho);
ParamSet params_p4(cplx alpha, cplx beta);
ParamSet params_p5(cplx alpha, cplx beta, cplx gamma, cplx delta);
ParamSet params_p5_from_xi(cplx xi, cplx zeta, cplx sigma);
ParamSet params_p6(cplx alpha, cplx beta, cplx gamma, cplx delta);
ParamSet params_p6_from_xi(cplx xi0, cplx xi1, cplx xi2, cplx xi3);

/// (theta, lambda, chi) of the general third-equation system; requires
/// mu^2 = 1/4.
struct P3ThetaForm {
    cplx theta, lambda, chi;
};
P3ThetaForm p3_theta_form(const P3Params& p);

/// Modular parameter of the sixth equation, tau = 2 pi i t (t > 0).
ModularParam p6_tau(double t);

struct CalogeroState {
    double t = 0.0;
    cplx u{}, du{};
};

struct blowup_error : std::runtime_error {
    CalogeroState last;
    std::vector<CalogeroState> partial; // accepted states up to the failure
    blowup_error(const std::string& what, CalogeroState s,
                 std::vector<CalogeroState> seen = {})
        : std::runtime_error(what), last(s), partial(std::move(seen)) {}
};

struct map_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time-dependent potential V(x,t) of the Calogero form.
cplx potential(const ParamSet& p, cplx x, double t);

/// H = du^2/2 + V(u,t).
cplx hamiltonian(const ParamSet& p, const CalogeroState& s);

/// ddot u = -dV/du, analytic per kind.
cplx rhs(const ParamSet& p, cplx u, double t);

/// Distance from u to the kind's singular set (+inf when none).
double singular_distance(const ParamSet& p, cplx u, double t);

struct IntegrateOptions {
    double tol = 1e-10;       // absolute and relative local tolerance
    double max_step = 0.005;  // keeps dense-output interpolation tight
    double fixed_step = 0.0;  // > 0 disables adaptivity (used by order probes)
};

/// Integrated classical motion with cubic Hermite dense output.
class Trajectory {
public:
    struct Node {
        double t;
        cplx u, du, ddu;
    };

    Trajectory(std::vector<Node> nodes, double tol);

    CalogeroState at(double t) const;
    double t_begin() const { return nodes_.front().t; }
    double t_end() const { return nodes_.back().t; }
    const std::vector<Node>& nodes() const { return nodes_; }
    double tol() const { return tol_; }

    /// Velocity offset applied on top of the dense output; used by the
    /// perturbation probes of the certification suites.
    Trajectory perturbed(cplx du_offset) const;

private:
    std::vector<Node> nodes_;
    double tol_;
    cplx du_offset_{};
};

/// Adaptive embedded Runge-Kutta 4(5) with PI step-size control. Throws
/// blowup_error when the motion approaches the singular set.
Trajectory integrate(const ParamSet& p, const CalogeroState& initial, double t_end,
                     const IntegrateOptions& opt = {});

/// The change of variables back to the original (y, T) form.
struct OriginalVars {
    cplx y, T;
};
OriginalVars to_original_variables(const ParamSet& p, const CalogeroState& s);

/// |LHS - RHS| of the original equation at time t, with d/dT formed by
/// divided differences of the mapped trajectory at t, t +- h.
double original_form_residual(const ParamSet& p, const Trajectory& traj, double t,
                              double h = 1e-4);

/// dH/dt vs dH/dt at frozen state, both by central differences; the
/// difference vanishes at O(h^2) along a true trajectory.
double hamiltonian_drift_residual(const ParamSet& p, const Trajectory& traj, double t,
                                  double h = 1e-4);

} // namespace pcl

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pcl/mat2.hpp"
#include "pcl/painleve.hpp"

namespace pcl {

struct degeneracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A U-V pair evaluated at one point of the (x, t) plane. Both matrices are
/// built traceless (entries a, b, c, -a).
struct LaxEval {
    Mat2 U, V;
    cplx x;
    double t;
};

/// Auxiliary variables of the general third-equation linear problem.
struct AuxP3 {
    cplx f, g11, g12, g21, v, w;
};

/// Auxiliary variables of the fifth-equation linear problem.
struct AuxP5 {
    cplx y, g, v, w, v1, w1;
};

/// Auxiliary variables of the sixth-equation linear problem. u_i g_i and
/// g_i (g_i + 2 xi_i)/(u_i g_i) are what the matrices consume; u_i alone is
/// reported for diagnostics and degenerates when g_i vanishes.
struct AuxP6 {
    cplx T, y, yT, z, K;
    cplx g0, g1, g2;
    cplx u0g0, u1g1, u2g2;
    cplx u0, u1, u2;
};

/// Free initial values of the auxiliary reconstructions. They are pure
/// scale freedoms; every certified quantity is invariant under them.
struct AuxSeeds {
    cplx g12_0{1.0, 0.0};
    cplx v_0{1.0, 0.0};
    cplx K_0{1.0, 0.0};
};

LaxEval build_p1(const CalogeroState& s, cplx x);
LaxEval build_p2(const CalogeroState& s, const P2Params& p, cplx x);
LaxEval build_p3_truncated(const CalogeroState& s, const P3TruncParams& p, cplx x);
LaxEval build_p3_general(const CalogeroState& s, const AuxP3& aux, const P3Params& p, cplx x);
LaxEval build_p4(const CalogeroState& s, const P4Params& p, cplx x);
LaxEval build_p5(const CalogeroState& s, const AuxP5& aux, const P5Params& p, cplx x);
LaxEval build_p6(const CalogeroState& s, const AuxP6& aux, const P6Params& p, cplx x);

/// Common interface for anything that can evaluate the pair at (x, t);
/// wave transport and the scalar reductions are written against it.
class LaxSystem {
public:
    virtual ~LaxSystem() = default;
    virtual Mat2 U(cplx x, double t) const = 0;
    virtual Mat2 V(cplx x, double t) const = 0;
};

/// The per-equation pipeline: trajectory plus reconstructed auxiliary
/// variables, able to evaluate the pair anywhere in the integrated span.
class LaxPipeline : public LaxSystem {
public:
    LaxPipeline(ParamSet params, Trajectory traj, AuxSeeds seeds = {});

    PainleveKind kind() const { return kind_of(params_); }
    const ParamSet& params() const { return params_; }
    const Trajectory& trajectory() const { return traj_; }

    LaxEval eval(cplx x, double t) const;
    Mat2 U(cplx x, double t) const override { return eval(x, t).U; }
    Mat2 V(cplx x, double t) const override { return eval(x, t).V; }

    /// Analytic x-derivatives of the pair for the closed-form kinds; the
    /// assembled sixth-equation pair falls back to finite differences.
    Mat2 dUdx(cplx x, double t) const;
    Mat2 dVdx(cplx x, double t) const;

    AuxP3 aux_p3(double t) const;
    AuxP5 aux_p5(double t) const;
    AuxP6 aux_p6(double t) const;

    /// Same pipeline over the velocity-perturbed trajectory (aux variables
    /// are reconstructed from the perturbed motion as well).
    LaxPipeline perturbed(cplx du_offset) const;

private:
    ParamSet params_;
    Trajectory traj_;
    AuxSeeds seeds_;
    // cumulative integral of the log-derivative driving the aux scale
    // (g12 for P3, v for P5, K for P6)
    std::vector<double> ts_;
    std::vector<cplx> logscale_, dlogscale_;

    bool has_aux() const;
    cplx logscale_at(double t) const;
    void build_aux_table();
};

/// Finite differences on a LaxSystem, 4th-order five-point stencils.
Mat2 fd_dUdx(const LaxSystem& sys, cplx x, double t, double h);
Mat2 fd_dVdx(const LaxSystem& sys, cplx x, double t, double h);
Mat2 fd_dUdt(const LaxSystem& sys, cplx x, double t, double h);

/// Diagonal gauge Omega = diag(omega, 1/omega) applied per the standard
/// transformation law; log_omega and its partial derivatives are supplied
/// analytically by the caller.
struct DiagonalGauge {
    std::function<cplx(cplx, double)> log_omega;
    std::function<cplx(cplx, double)> dlog_dx;
    std::function<cplx(cplx, double)> dlog_dt;
};

class GaugedLaxSystem : public LaxSystem {
public:
    GaugedLaxSystem(const LaxSystem& base, DiagonalGauge gauge)
        : base_(base), gauge_(std::move(gauge)) {}
    Mat2 U(cplx x, double t) const override;
    Mat2 V(cplx x, double t) const override;

private:
    const LaxSystem& base_;
    DiagonalGauge gauge_;
};

/// Zero-curvature residual || dt U - dx V + [U, V] ||_F with the time
/// derivative by central differences over the dense trajectory, at h and
/// h/2 for an order estimate.
struct ZeroCurvatureReport {
    std::string kind;
    cplx x;
    double t;
    double h;
    double residual;
    double halved_residual;
    double order_estimate;
};

ZeroCurvatureReport zero_curvature_residual(const LaxPipeline& pl, cplx x, double t,
                                            double h_t = 1e-4, double h_x = 1e-3);

/// Variant evaluated through an arbitrary LaxSystem (used for the gauge
/// covariance checks); all derivatives by finite differences.
double zero_curvature_residual_fd(const LaxSystem& sys, cplx x, double t, double h_t,
                                  double h_x);

std::string to_json(const ZeroCurvatureReport& r);

} // namespace pcl

#pragma once

#include <vector>

#include "pcl/correspondence.hpp"
#include "pcl/lax.hpp"

namespace pcl {

struct WaveState {
    cplx psi1, psi2;
    cplx x;
    double t = 0.0;
};

/// Fixed-step RK4 integration of dx Psi = U Psi at fixed t.
WaveState transport_x(const LaxSystem& sys, const WaveState& w, cplx x_target, int steps);

/// Fixed-step RK4 integration of dt Psi = V Psi at fixed x.
WaveState transport_t(const LaxSystem& sys, const WaveState& w, double t_target, int steps);

/// Fundamental 2x2 solutions along the same segments.
Mat2 transport_x_matrix(const LaxSystem& sys, cplx x0, cplx x1, double t, int steps);
Mat2 transport_t_matrix(const LaxSystem& sys, cplx x, double t0, double t1, int steps);

/// Wronskian psi1 chi2 - psi2 chi1 of two wave states at the same point.
cplx wronskian(const WaveState& a, const WaveState& b);

/// || M_loop - I ||_F for parallel transport around the rectangle
/// [x0, x0+dx] x [t0, t0+dt], traversed right, up, left, down.
double plaquette_defect(const LaxSystem& sys, cplx x0, double t0, cplx dx, double dt,
                        int steps);

/// Cumulative trapezoid of the classical Hamiltonian along the trajectory,
/// S(t) = int_{t0}^t H dt'; the factor exp(S) converts psi1 into the wave
/// function of the non-stationary Schroedinger equation.
class ActionAccumulator {
public:
    ActionAccumulator(const ParamSet& params, const Trajectory& traj, double step = 1e-4);
    cplx at(double t) const;

private:
    std::vector<double> ts_;
    std::vector<cplx> vals_, derivs_;
};

/// Pointwise data of the Schroedinger-residual sweep over a real x-grid.
struct SchrodingerSweep {
    std::vector<double> xs;
    std::vector<cplx> psi;        // Psi(x_i, t)
    std::vector<double> residual; // interior points; boundary entries are 0
    double max_residual = 0.0;    // max residual / max |Psi|
    double h_t = 0.0;
};

SchrodingerSweep schrodinger_residual(const LaxPipeline& pl, double x_lo, double x_hi,
                                      std::size_t count, double t, double h_t,
                                      bool apply_shift = true, int steps_per_unit = 600,
                                      Vec2 basis = {1.0, 0.0});

} // namespace pcl

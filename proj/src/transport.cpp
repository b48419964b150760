#include "pcl/transport.hpp"

#include <algorithm>
#include <cmath>

namespace pcl {

namespace {

Vec2 rk4_step_x(const LaxSystem& sys, Vec2 y, cplx x, cplx h, double t) {
    Vec2 k1 = sys.U(x, t) * y;
    Vec2 k2 = sys.U(x + 0.5 * h, t) * (y + 0.5 * h * k1);
    Vec2 k3 = sys.U(x + 0.5 * h, t) * (y + 0.5 * h * k2);
    Vec2 k4 = sys.U(x + h, t) * (y + h * k3);
    return y + (1.0 / 6.0) * h * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec2 rk4_step_t(const LaxSystem& sys, Vec2 y, cplx x, double h, double t) {
    Vec2 k1 = sys.V(x, t) * y;
    Vec2 k2 = sys.V(x, t + 0.5 * h) * (y + 0.5 * h * k1);
    Vec2 k3 = sys.V(x, t + 0.5 * h) * (y + 0.5 * h * k2);
    Vec2 k4 = sys.V(x, t + h) * (y + h * k3);
    return y + (1.0 / 6.0) * h * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

WaveState transport_x(const LaxSystem& sys, const WaveState& w, cplx x_target, int steps) {
    if (steps < 1) throw std::invalid_argument("transport_x: steps must be positive");
    Vec2 y{w.psi1, w.psi2};
    cplx h = (x_target - w.x) / double(steps);
    if (h == cplx(0.0)) return {y.v1, y.v2, x_target, w.t};
    cplx x = w.x;
    for (int k = 0; k < steps; ++k) {
        y = rk4_step_x(sys, y, x, h, w.t);
        x += h;
    }
    return {y.v1, y.v2, x_target, w.t};
}

WaveState transport_t(const LaxSystem& sys, const WaveState& w, double t_target, int steps) {
    if (steps < 1) throw std::invalid_argument("transport_t: steps must be positive");
    Vec2 y{w.psi1, w.psi2};
    double h = (t_target - w.t) / double(steps);
    if (h == 0.0) return {y.v1, y.v2, w.x, t_target};
    double t = w.t;
    for (int k = 0; k < steps; ++k) {
        y = rk4_step_t(sys, y, w.x, h, t);
        t += h;
    }
    return {y.v1, y.v2, w.x, t_target};
}

Mat2 transport_x_matrix(const LaxSystem& sys, cplx x0, cplx x1, double t, int steps) {
    WaveState e1 = transport_x(sys, {1.0, 0.0, x0, t}, x1, steps);
    WaveState e2 = transport_x(sys, {0.0, 1.0, x0, t}, x1, steps);
    return {e1.psi1, e2.psi1, e1.psi2, e2.psi2};
}

Mat2 transport_t_matrix(const LaxSystem& sys, cplx x, double t0, double t1, int steps) {
    WaveState e1 = transport_t(sys, {1.0, 0.0, x, t0}, t1, steps);
    WaveState e2 = transport_t(sys, {0.0, 1.0, x, t0}, t1, steps);
    return {e1.psi1, e2.psi1, e1.psi2, e2.psi2};
}

cplx wronskian(const WaveState& a, const WaveState& b) {
    return a.psi1 * b.psi2 - a.psi2 * b.psi1;
}

double plaquette_defect(const LaxSystem& sys, cplx x0, double t0, cplx dx, double dt,
                        int steps) {
    Mat2 right = transport_x_matrix(sys, x0, x0 + dx, t0, steps);
    Mat2 up = transport_t_matrix(sys, x0 + dx, t0, t0 + dt, steps);
    Mat2 left = transport_x_matrix(sys, x0 + dx, x0, t0 + dt, steps);
    Mat2 down = transport_t_matrix(sys, x0, t0 + dt, t0, steps);
    Mat2 loop = down * (left * (up * right));
    return frobenius_norm(loop - Mat2::identity());
}

ActionAccumulator::ActionAccumulator(const ParamSet& params, const Trajectory& traj,
                                     double step) {
    double t0 = traj.t_begin(), t1 = traj.t_end();
    std::size_t n = std::max<std::size_t>(8, std::size_t(std::ceil((t1 - t0) / step)));
    ts_.reserve(n + 1);
    vals_.reserve(n + 1);
    derivs_.reserve(n + 1);
    cplx acc = 0.0;
    cplx h_prev = hamiltonian(params, traj.at(t0));
    ts_.push_back(t0);
    vals_.push_back(acc);
    derivs_.push_back(h_prev);
    for (std::size_t k = 1; k <= n; ++k) {
        double t = t0 + (t1 - t0) * double(k) / double(n);
        cplx h_here = hamiltonian(params, traj.at(t));
        acc += 0.5 * (h_prev + h_here) * (t - ts_.back());
        ts_.push_back(t);
        vals_.push_back(acc);
        derivs_.push_back(h_here);
        h_prev = h_here;
    }
}

cplx ActionAccumulator::at(double t) const {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t i1 = std::min<std::size_t>(ts_.size() - 1,
                                           std::max<std::size_t>(1, it - ts_.begin()));
    double ta = ts_[i1 - 1], tb = ts_[i1];
    double h = tb - ta, s = std::clamp((t - ta) / h, -0.5, 1.5);
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * vals_[i1 - 1] + (s3 - 2 * s2 + s) * h * derivs_[i1 - 1] +
           (-2 * s3 + 3 * s2) * vals_[i1] + (s3 - s2) * h * derivs_[i1];
}

SchrodingerSweep schrodinger_residual(const LaxPipeline& pl, double x_lo, double x_hi,
                                      std::size_t count, double t, double h_t,
                                      bool apply_shift, int steps_per_unit, Vec2 basis) {
    if (count < 5) throw std::invalid_argument("schrodinger_residual: need >= 5 grid points");
    const Trajectory& traj = pl.trajectory();
    const double t0 = traj.t_begin();
    const double d = (x_hi - x_lo) / double(count - 1);
    const cplx xc = 0.5 * (x_lo + x_hi);

    ActionAccumulator action(pl.params(), traj);
    ParamSet target = apply_shift ? shift_params(pl.params()) : pl.params();

    // psi1 on the grid at a fixed time slice: t-transport to the slice at
    // the grid center, then x-transports marching outward point to point
    auto slice = [&](double ts) {
        std::vector<cplx> out(count);
        int steps_t = std::max(48, int(std::ceil(std::abs(ts - t0) * steps_per_unit)));
        int steps_x = std::max(8, int(std::ceil(std::abs(d) * steps_per_unit)));
        WaveState center = transport_t(pl, {basis.v1, basis.v2, xc, t0}, ts, steps_t);
        // locate the two grid points straddling the center
        std::size_t ic = std::min<std::size_t>(count - 1, std::size_t((xc.real() - x_lo) / d));
        WaveState cur = center;
        for (std::size_t i = ic + 1; i-- > 0;) { // march left
            cplx xi = x_lo + double(i) * d;
            cur = transport_x(pl, cur, xi, steps_x);
            out[i] = cur.psi1;
        }
        cur = center;
        for (std::size_t i = ic + 1; i < count; ++i) { // march right
            cplx xi = x_lo + double(i) * d;
            cur = transport_x(pl, cur, xi, steps_x);
            out[i] = cur.psi1;
        }
        cplx factor = std::exp(action.at(ts));
        for (cplx& v : out) v *= factor;
        return out;
    };

    std::vector<cplx> mid = slice(t);
    std::vector<cplx> fwd = slice(t + h_t);
    std::vector<cplx> bwd = slice(t - h_t);

    SchrodingerSweep sweep;
    sweep.h_t = h_t;
    sweep.xs.resize(count);
    sweep.residual.assign(count, 0.0);
    sweep.psi = mid;
    double psi_max = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sweep.xs[i] = x_lo + double(i) * d;
        psi_max = std::max(psi_max, std::abs(mid[i]));
    }
    for (std::size_t i = 2; i + 2 < count; ++i) {
        cplx dt_psi = (fwd[i] - bwd[i]) / (2.0 * h_t);
        cplx dxx = (-mid[i + 2] + 16.0 * mid[i + 1] - 30.0 * mid[i] + 16.0 * mid[i - 1] -
                    mid[i - 2]) /
                   (12.0 * d * d);
        cplx v = potential(target, sweep.xs[i], t);
        sweep.residual[i] = std::abs(dt_psi - 0.5 * dxx - v * mid[i]);
        sweep.max_residual = std::max(sweep.max_residual, sweep.residual[i]);
    }
    if (psi_max > 0.0) {
        sweep.max_residual /= psi_max;
        for (double& r : sweep.residual) r /= psi_max;
    }
    return sweep;
}

} // namespace pcl

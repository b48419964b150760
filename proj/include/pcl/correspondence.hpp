#pragma once

#include <string>
#include <vector>

#include "pcl/lax.hpp"

namespace pcl {

/// Parameter shifts of the quantum Hamiltonian: identity for the first
/// three equations, beta+1/2 for the fourth, +-1/8 on (alpha, beta) for the
/// fifth and on all four for the sixth.
ParamSet shift_params(const ParamSet& p);

/// Potential of the non-stationary Schroedinger equation,
/// U(x,t) = det(U)/2 - a_x/2 + V11, valid under the b_x = 2B normalization.
cplx schrodinger_potential(const LaxEval& lax, cplx a_x);

/// Separation of variables U(x,t) = V_shifted(x,t) - H(du,u) over a grid.
/// Deviations are reported before any offset fitting.
struct SeparationReport {
    std::string kind;
    double t = 0.0;
    std::size_t grid_size = 0;
    double max_dev = 0.0;  // max |U + H - V_shifted| over the grid
    cplx offset;           // mean of U + H - V_shifted
    cplx H_classical;      // hamiltonian of the trajectory state at t
    cplx H_extracted;      // mean of V_shifted - U (x-independent part)
    bool shift_applied = true;
};

SeparationReport separation_check(const LaxPipeline& pl, double t,
                                  const std::vector<cplx>& x_grid, bool apply_shift = true);

std::string to_json(const SeparationReport& r, const ParamSet& params,
                    const ParamSet& shifted);

/// Scalar stationary reduction at (x, t): the Schroedinger potential W, its
/// normal form checkW, Lambda = dx(log b)/2 and the Fuchs-Garnier residual
/// |dt checkW - 2 checkW dx Lambda - Lambda dx checkW - dx^3 Lambda / 4|.
struct StationaryReport {
    cplx W, checkW, Lambda;
    double fg_residual = 0.0;
    double fg_residual_halved = 0.0;
};

StationaryReport stationary_reduction(const LaxPipeline& pl, cplx x, double t,
                                      double h_t = 1e-4);

struct ambiguity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Newton iteration on b(x, t) from the center of a search box, guarded by
/// an argument-principle count of zeros on the box boundary.
cplx locate_u_from_b(const LaxSystem& sys, double t, cplx box_center, double box_half);

} // namespace pcl

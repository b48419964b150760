#pragma once

#include <iosfwd>
#include <string>

#include "pcl/lax.hpp"
#include "pcl/painleve.hpp"
#include "pcl/transport.hpp"

namespace pcl {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t count = 64;
};

struct StepSpec {
    double h_t = 1e-4;
    double h_x = 1e-5;
};

/// One run: equation, parameters, initial data, integration and grid
/// settings. JSON, one file per run.
struct RunConfig {
    ParamSet params = params_p1();
    CalogeroState initial{};
    double t_end = 0.3;
    double tol = 1e-10;
    GridSpec grid;
    StepSpec steps;
    AuxSeeds seeds;
    std::string out_dir = ".";
    bool disable_shift_table = false;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Trajectory CSV, header exactly `t,re_u,im_u,re_du,im_du`, rows in time
/// order, '.' decimal separator.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_states_csv(std::ostream& os, const std::vector<CalogeroState>& states);

/// Residual sweep CSV, header exactly `x,re_psi,im_psi,residual`.
void write_residual_sweep_csv(std::ostream& os, const SchrodingerSweep& sweep);

std::string format_double(double v);

} // namespace pcl

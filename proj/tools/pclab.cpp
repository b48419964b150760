// Command-line front end: trajectory runs, certification suites and plot
// data. Exit codes: 0 pass, 2 certification failure, 3 runtime/domain
// error, 4 bad configuration or usage.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pcl/certify.hpp"
#include "pcl/correspondence.hpp"
#include "pcl/io.hpp"
#include "pcl/transport.hpp"

namespace {

using namespace pcl;

constexpr int kExitPass = 0;
constexpr int kExitCertFail = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitBadConfig = 4;

std::filesystem::path out_path(const RunConfig& cfg, const std::string& override_dir,
                               const std::string& file) {
    std::filesystem::path dir = override_dir.empty() ? cfg.out_dir : override_dir;
    std::filesystem::create_directories(dir);
    return dir / file;
}

void write_summary(const std::filesystem::path& path, const CalogeroState& final_state,
                   double drift, bool complete) {
    std::ofstream os(path);
    os.precision(17);
    os << "{\n  \"complete\": " << (complete ? "true" : "false") << ",\n  \"final_state\": {"
       << "\"t\": " << final_state.t << ", \"u\": [" << final_state.u.real() << ", "
       << final_state.u.imag() << "], \"du\": [" << final_state.du.real() << ", "
       << final_state.du.imag() << "]},\n  \"H_drift_check\": " << drift << "\n}\n";
}

int cmd_trajectory(const RunConfig& cfg, const std::string& out_dir) {
    try {
        Trajectory traj = integrate(cfg.params, cfg.initial, cfg.t_end, {.tol = cfg.tol});
        std::ofstream csv(out_path(cfg, out_dir, "trajectory.csv"), std::ios::binary);
        write_trajectory_csv(csv, traj);
        double tmid = 0.5 * (traj.t_begin() + traj.t_end());
        double drift = hamiltonian_drift_residual(cfg.params, traj, tmid);
        CalogeroState fin = traj.at(traj.t_end());
        write_summary(out_path(cfg, out_dir, "summary.json"), fin, drift, true);
        return kExitPass;
    } catch (const blowup_error& e) {
        std::ofstream csv(out_path(cfg, out_dir, "trajectory.csv"), std::ios::binary);
        write_states_csv(csv, e.partial);
        write_summary(out_path(cfg, out_dir, "summary.json"), e.last, -1.0, false);
        std::cerr << "trajectory: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_certify(const RunConfig& cfg, const std::string& out_dir, const std::string& suite) {
    CertifyOptions opt;
    opt.disable_shift_table = cfg.disable_shift_table;
    std::vector<CheckResult> checks;
    if (suite == "elliptic") checks = certify_elliptic(opt);
    else if (suite == "lax") checks = certify_lax(opt);
    else if (suite == "correspondence") checks = certify_correspondence(opt);
    else if (suite == "transport") checks = certify_transport(opt);
    else if (suite == "all") checks = certify_all(opt);
    else {
        std::cerr << "certify: unknown suite '" << suite << "'\n";
        return kExitBadConfig;
    }
    std::ofstream js(out_path(cfg, out_dir, "certify_" + suite + ".json"));
    js << to_json(checks);
    for (const CheckResult& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << c.value
                  << (c.greater_is_pass ? " > " : " < ") << c.threshold << "\n";
    }
    std::cout << (all_pass(checks) ? "certify: all checks passed\n"
                                   : "certify: FAILURES present\n");
    return all_pass(checks) ? kExitPass : kExitCertFail;
}

int cmd_plotdata(const RunConfig& cfg, const std::string& out_dir, const std::string& what) {
    const GridSpec& g = cfg.grid;
    auto xs = [&](std::size_t i) {
        return g.x_min + (g.x_max - g.x_min) * double(i) / double(g.count - 1);
    };
    if (what == "potential") {
        std::ofstream os(out_path(cfg, out_dir, "potential.csv"), std::ios::binary);
        os << "x,re_v,im_v\n";
        for (std::size_t i = 0; i < g.count; ++i) {
            cplx v = potential(cfg.params, xs(i), cfg.initial.t);
            os << format_double(xs(i)) << ',' << format_double(v.real()) << ','
               << format_double(v.imag()) << '\n';
        }
        return kExitPass;
    }
    Trajectory traj = integrate(cfg.params, cfg.initial, cfg.t_end, {.tol = cfg.tol});
    LaxPipeline pl(cfg.params, std::move(traj), cfg.seeds);
    double tmid = 0.5 * (cfg.initial.t + cfg.t_end);
    if (what == "separation") {
        ParamSet target = cfg.disable_shift_table ? cfg.params : shift_params(cfg.params);
        CalogeroState s = pl.trajectory().at(tmid);
        cplx H = hamiltonian(cfg.params, s);
        std::ofstream os(out_path(cfg, out_dir, "separation.csv"), std::ios::binary);
        os << "x,re_dev,im_dev\n";
        for (std::size_t i = 0; i < g.count; ++i) {
            cplx upot = schrodinger_potential(pl.eval(xs(i), tmid), pl.dUdx(xs(i), tmid).a);
            cplx dev = upot + H - potential(target, xs(i), tmid);
            os << format_double(xs(i)) << ',' << format_double(dev.real()) << ','
               << format_double(dev.imag()) << '\n';
        }
        return kExitPass;
    }
    if (what == "residual_sweep") {
        SchrodingerSweep sweep =
            schrodinger_residual(pl, g.x_min, g.x_max, g.count, tmid, cfg.steps.h_t,
                                 !cfg.disable_shift_table);
        std::ofstream os(out_path(cfg, out_dir, "residual_sweep.csv"), std::ios::binary);
        write_residual_sweep_csv(os, sweep);
        return kExitPass;
    }
    std::cerr << "plotdata: unknown target '" << what << "'\n";
    return kExitBadConfig;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Painleve-Calogero correspondence laboratory"};
    app.require_subcommand(1);
    app.fallthrough(); // parent --config/--out may follow the subcommand

    std::string config_path, out_dir, suite = "all", what = "potential";
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--out", out_dir, "output directory override");

    CLI::App* traj = app.add_subcommand("trajectory", "integrate and dump the trajectory");
    CLI::App* cert = app.add_subcommand("certify", "run a certification suite");
    cert->add_option("--suite", suite, "elliptic|lax|correspondence|transport|all");
    CLI::App* plot = app.add_subcommand("plotdata", "emit plot-ready CSV data");
    plot->add_option("--what", what, "potential|separation|residual_sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadConfig;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const config_error& e) {
        std::cerr << e.what() << "\n";
        return kExitBadConfig;
    }

    try {
        if (traj->parsed()) return cmd_trajectory(cfg, out_dir);
        if (cert->parsed()) return cmd_certify(cfg, out_dir, suite);
        if (plot->parsed()) return cmd_plotdata(cfg, out_dir, what);
    } catch (const blowup_error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitBadConfig;
}

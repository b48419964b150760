#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "pcl/certify.hpp"
#include "pcl/io.hpp"

using namespace pcl;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string sample_config_json() {
    return R"({
      "kind": "P2",
      "params": {"alpha": [0.7, 0.0]},
      "initial": {"t0": 0.2, "u0": [0.35, 0.0], "du0": [-0.1, 0.06]},
      "t_end": 0.7,
      "tol": 1e-10,
      "grid": {"x_min": -0.9, "x_max": 0.9, "count": 64},
      "steps": {"h_t": 2e-3, "h_x": 1e-5},
      "out_dir": "."
    })";
}

} // namespace

TEST_CASE("config round trip") {
    RunConfig cfg = parse_config(sample_config_json());
    CHECK(kind_of(cfg.params) == PainleveKind::P2);
    CHECK(cfg.initial.t == 0.2);
    CHECK(cfg.tol == 1e-10);
    std::string once = serialize_config(cfg);
    std::string twice = serialize_config(parse_config(once));
    CHECK(once == twice);

    // P6 accepts either the xi or the standard parameters
    RunConfig p6 = parse_config(R"({
      "kind": "P6",
      "params": {"xi0": 0.11, "xi1": 0.09, "xi2": 0.13, "xi3": -0.9},
      "initial": {"t0": 0.2, "u0": [0.24, 0.33], "du0": [0.05, 0.03]},
      "t_end": 0.4, "tol": 1e-11
    })");
    const auto& v = std::get<P6Params>(p6.params);
    CHECK(std::abs(v.xi - cplx(-0.57)) < 1e-14);
    std::string s1 = serialize_config(p6);
    CHECK(s1 == serialize_config(parse_config(s1)));
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_config("{"), config_error);
    CHECK_THROWS_AS(parse_config("{}"), config_error); // missing kind
    CHECK_THROWS_AS(parse_config(R"({"kind": "P9"})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"kind": "P1", "tol": 1e-2})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"kind": "P1", "tol": 1e-13})"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"kind": "P1", "grid": {"count": 20000}})"),
                    config_error);
    CHECK_THROWS_AS(parse_config(R"({"kind": "P2", "params": {}})"), config_error);
    CHECK_NOTHROW(parse_config(R"({"kind": "P1"})"));
}

TEST_CASE("trajectory CSV format and determinism") {
    RunConfig cfg = parse_config(sample_config_json());
    Trajectory t1 = integrate(cfg.params, cfg.initial, cfg.t_end, {.tol = cfg.tol});
    Trajectory t2 = integrate(cfg.params, cfg.initial, cfg.t_end, {.tol = cfg.tol});
    std::ostringstream a, b;
    write_trajectory_csv(a, t1);
    write_trajectory_csv(b, t2);
    CHECK(a.str() == b.str());
    CHECK(a.str().substr(0, 24) == "t,re_u,im_u,re_du,im_du\n");
    // monotone time column
    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    double prev = -1e300;
    int rows = 0;
    while (std::getline(in, line)) {
        double t = std::strtod(line.c_str(), nullptr);
        CHECK(t > prev);
        prev = t;
        ++rows;
    }
    CHECK(rows > 10);
}

TEST_CASE("halved tolerance moves the endpoint by less than 10 tol") {
    RunConfig cfg = parse_config(sample_config_json());
    Trajectory t1 = integrate(cfg.params, cfg.initial, cfg.t_end, {.tol = 1e-9});
    Trajectory t2 = integrate(cfg.params, cfg.initial, cfg.t_end, {.tol = 0.5e-9});
    CHECK(std::abs(t1.at(cfg.t_end).u - t2.at(cfg.t_end).u) < 10.0 * 1e-9);
}

TEST_CASE("residual sweep CSV schema") {
    SchrodingerSweep sweep;
    sweep.xs = {0.0, 0.1};
    sweep.psi = {{1.0, 0.5}, {0.9, 0.4}};
    sweep.residual = {0.0, 1e-7};
    std::ostringstream os;
    write_residual_sweep_csv(os, sweep);
    CHECK(os.str().substr(0, 25) == "x,re_psi,im_psi,residual\n");
}

TEST_CASE("thread budget honors the environment cap") {
    setenv("PCL_THREADS", "1", 1);
    CHECK(thread_budget() == 1);
    unsetenv("PCL_THREADS");
    CHECK(thread_budget() >= 1);
}

#ifndef _WIN32
TEST_CASE("command-line contract") {
    const char* bin = std::getenv("PCLAB_BIN");
    if (!bin) {
        MESSAGE("PCLAB_BIN not set; skipping the subprocess checks");
        return;
    }
    std::string dir = "/tmp/pclab_test";
    (void)!std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
    spit(dir + "/run.json", sample_config_json());

    auto run = [&](const std::string& args) {
        std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
        int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };

    // exit 0 and byte-identical reruns
    CHECK(run("trajectory --config " + dir + "/run.json --out " + dir + "/a") == 0);
    CHECK(run("trajectory --config " + dir + "/run.json --out " + dir + "/b") == 0);
    std::string csv_a = slurp(dir + "/a/trajectory.csv");
    CHECK(csv_a == slurp(dir + "/b/trajectory.csv"));
    CHECK(csv_a.substr(0, 24) == "t,re_u,im_u,re_du,im_du\n");
    CHECK(slurp(dir + "/a/summary.json").find("\"complete\": true") != std::string::npos);

    // plotdata potential for P1 at t = 0 equals -x^3/2
    spit(dir + "/p1.json", R"({"kind": "P1", "t_end": 0.2, "tol": 1e-10,
      "grid": {"x_min": -1, "x_max": 1, "count": 21}})");
    CHECK(run("plotdata --config " + dir + "/p1.json --what potential --out " + dir) == 0);
    {
        std::istringstream in(slurp(dir + "/potential.csv"));
        std::string line;
        std::getline(in, line);
        CHECK(line == "x,re_v,im_v");
        bool checked = false;
        while (std::getline(in, line)) {
            double x, re;
            std::sscanf(line.c_str(), "%lf,%lf", &x, &re);
            CHECK(std::abs(re - (-x * x * x / 2.0)) < 1e-14);
            checked = true;
        }
        CHECK(checked);
    }

    // bad configs exit 4
    spit(dir + "/bad.json", "{\"kind\": \"P9\"}");
    CHECK(run("trajectory --config " + dir + "/bad.json --out " + dir) == 4);
    CHECK(run("trajectory --config " + dir + "/absent.json --out " + dir) == 4);
    CHECK(run("bogus-subcommand --config " + dir + "/run.json") == 4);

    // blow-up exits 3 with partial output
    spit(dir + "/blow.json", R"({"kind": "P1", "t_end": 3.0, "tol": 1e-9,
      "initial": {"t0": 0.0, "u0": [6.0, 0.0], "du0": [8.0, 0.0]}})");
    CHECK(run("trajectory --config " + dir + "/blow.json --out " + dir + "/blow") == 3);
    CHECK(slurp(dir + "/blow/trajectory.csv").substr(0, 24) == "t,re_u,im_u,re_du,im_du\n");
    CHECK(slurp(dir + "/blow/summary.json").find("\"complete\": false") != std::string::npos);

    // the elliptic identity suite passes
    CHECK(run("certify --config " + dir + "/run.json --suite elliptic --out " + dir) == 0);
    CHECK(run("certify --config " + dir + "/run.json --suite bogus --out " + dir) == 4);

    // certify with the shift table disabled exits 2 (negative control)
    spit(dir + "/noshift.json", R"({"kind": "P1", "t_end": 0.2, "tol": 1e-10,
      "debug": {"disable_shift_table": true}})");
    CHECK(run("certify --config " + dir + "/noshift.json --suite correspondence --out " +
              dir) == 2);
    // and passes with the table enabled
    spit(dir + "/shift.json", R"({"kind": "P1", "t_end": 0.2, "tol": 1e-10})");
    CHECK(run("certify --config " + dir + "/shift.json --suite correspondence --out " + dir) ==
          0);
}
#endif

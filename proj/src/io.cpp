#include "pcl/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace pcl {

using nlohmann::json;

namespace {

json cplx_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx cplx_from_json(const json& j, const char* what) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw config_error(std::string("config: ") + what + " must be a number or [re, im]");
}

cplx get_cplx(const json& j, const char* key) {
    if (!j.contains(key)) throw config_error(std::string("config: missing field ") + key);
    return cplx_from_json(j.at(key), key);
}

json params_to_json(const ParamSet& p) {
    json j;
    switch (kind_of(p)) {
        case PainleveKind::P1: j = json::object(); break;
        case PainleveKind::P2:
            j["alpha"] = cplx_to_json(std::get<P2Params>(p).alpha);
            break;
        case PainleveKind::P3Truncated:
            j["nu"] = cplx_to_json(std::get<P3TruncParams>(p).nu);
            break;
        case PainleveKind::P3: {
            const auto& v = std::get<P3Params>(p);
            j["nu"] = cplx_to_json(v.nu);
            j["mu"] = cplx_to_json(v.mu);
            j["rho"] = cplx_to_json(v.rho);
            break;
        }
        case PainleveKind::P4: {
            const auto& v = std::get<P4Params>(p);
            j["alpha"] = cplx_to_json(v.alpha);
            j["beta"] = cplx_to_json(v.beta);
            break;
        }
        case PainleveKind::P5: {
            const auto& v = std::get<P5Params>(p);
            j["alpha"] = cplx_to_json(v.alpha);
            j["beta"] = cplx_to_json(v.beta);
            j["gamma"] = cplx_to_json(v.gamma);
            j["delta"] = cplx_to_json(v.delta);
            break;
        }
        case PainleveKind::P6: {
            const auto& v = std::get<P6Params>(p);
            j["alpha"] = cplx_to_json(v.alpha);
            j["beta"] = cplx_to_json(v.beta);
            j["gamma"] = cplx_to_json(v.gamma);
            j["delta"] = cplx_to_json(v.delta);
            break;
        }
    }
    return j;
}

ParamSet params_from_json(PainleveKind kind, const json& j) {
    switch (kind) {
        case PainleveKind::P1: return params_p1();
        case PainleveKind::P2: return params_p2(get_cplx(j, "alpha"));
        case PainleveKind::P3Truncated: return params_p3_truncated(get_cplx(j, "nu"));
        case PainleveKind::P3:
            return params_p3(get_cplx(j, "nu"), get_cplx(j, "mu"), get_cplx(j, "rho"));
        case PainleveKind::P4: return params_p4(get_cplx(j, "alpha"), get_cplx(j, "beta"));
        case PainleveKind::P5:
            return params_p5(get_cplx(j, "alpha"), get_cplx(j, "beta"), get_cplx(j, "gamma"),
                             get_cplx(j, "delta"));
        case PainleveKind::P6:
            if (j.contains("xi0"))
                return params_p6_from_xi(get_cplx(j, "xi0"), get_cplx(j, "xi1"),
                                         get_cplx(j, "xi2"), get_cplx(j, "xi3"));
            return params_p6(get_cplx(j, "alpha"), get_cplx(j, "beta"), get_cplx(j, "gamma"),
                             get_cplx(j, "delta"));
    }
    throw std::logic_error("unreachable");
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig cfg;
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw config_error("config: missing string field 'kind'");
    PainleveKind kind;
    try {
        kind = kind_from_name(j.at("kind").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    cfg.params = params_from_json(kind, j.value("params", json::object()));
    if (j.contains("initial")) {
        const json& ji = j.at("initial");
        if (!ji.contains("t0") || !ji.at("t0").is_number())
            throw config_error("config: initial.t0 must be a real number");
        cfg.initial.t = ji.at("t0").get<double>();
        cfg.initial.u = get_cplx(ji, "u0");
        cfg.initial.du = get_cplx(ji, "du0");
    }
    cfg.t_end = j.value("t_end", cfg.t_end);
    cfg.tol = j.value("tol", cfg.tol);
    if (!(cfg.tol >= 1e-12 && cfg.tol <= 1e-3))
        throw config_error("config: tol must lie in [1e-12, 1e-3]");
    if (j.contains("grid")) {
        const json& jg = j.at("grid");
        cfg.grid.x_min = jg.value("x_min", cfg.grid.x_min);
        cfg.grid.x_max = jg.value("x_max", cfg.grid.x_max);
        cfg.grid.count = jg.value("count", cfg.grid.count);
    }
    if (cfg.grid.count < 5 || cfg.grid.count > 10000)
        throw config_error("config: grid.count must lie in [5, 10000]");
    if (!(cfg.grid.x_max > cfg.grid.x_min))
        throw config_error("config: grid.x_max must exceed grid.x_min");
    if (j.contains("steps")) {
        const json& js = j.at("steps");
        cfg.steps.h_t = js.value("h_t", cfg.steps.h_t);
        cfg.steps.h_x = js.value("h_x", cfg.steps.h_x);
    }
    if (!(cfg.steps.h_t > 0.0) || !(cfg.steps.h_x > 0.0))
        throw config_error("config: step sizes must be positive");
    if (j.contains("aux_seeds")) {
        const json& ja = j.at("aux_seeds");
        if (ja.contains("g12_0")) cfg.seeds.g12_0 = cplx_from_json(ja.at("g12_0"), "g12_0");
        if (ja.contains("v_0")) cfg.seeds.v_0 = cplx_from_json(ja.at("v_0"), "v_0");
        if (ja.contains("K_0")) cfg.seeds.K_0 = cplx_from_json(ja.at("K_0"), "K_0");
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    if (j.contains("debug")) {
        cfg.disable_shift_table = j.at("debug").value("disable_shift_table", false);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["kind"] = kind_name(kind_of(cfg.params));
    j["params"] = params_to_json(cfg.params);
    j["initial"] = {{"t0", cfg.initial.t},
                    {"u0", cplx_to_json(cfg.initial.u)},
                    {"du0", cplx_to_json(cfg.initial.du)}};
    j["t_end"] = cfg.t_end;
    j["tol"] = cfg.tol;
    j["grid"] = {{"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max},
                 {"count", cfg.grid.count}};
    j["steps"] = {{"h_t", cfg.steps.h_t}, {"h_x", cfg.steps.h_x}};
    j["aux_seeds"] = {{"g12_0", cplx_to_json(cfg.seeds.g12_0)},
                      {"v_0", cplx_to_json(cfg.seeds.v_0)},
                      {"K_0", cplx_to_json(cfg.seeds.K_0)}};
    j["out_dir"] = cfg.out_dir;
    j["debug"] = {{"disable_shift_table", cfg.disable_shift_table}};
    return j.dump(2) + "\n";
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,re_u,im_u,re_du,im_du\n";
    for (const auto& n : traj.nodes()) {
        os << format_double(n.t) << ',' << format_double(n.u.real()) << ','
           << format_double(n.u.imag()) << ',' << format_double(n.du.real()) << ','
           << format_double(n.du.imag()) << '\n';
    }
}

void write_states_csv(std::ostream& os, const std::vector<CalogeroState>& states) {
    os << "t,re_u,im_u,re_du,im_du\n";
    for (const auto& s : states) {
        os << format_double(s.t) << ',' << format_double(s.u.real()) << ','
           << format_double(s.u.imag()) << ',' << format_double(s.du.real()) << ','
           << format_double(s.du.imag()) << '\n';
    }
}

void write_residual_sweep_csv(std::ostream& os, const SchrodingerSweep& sweep) {
    os << "x,re_psi,im_psi,residual\n";
    for (std::size_t i = 0; i < sweep.xs.size(); ++i) {
        os << format_double(sweep.xs[i]) << ',' << format_double(sweep.psi[i].real()) << ','
           << format_double(sweep.psi[i].imag()) << ',' << format_double(sweep.residual[i])
           << '\n';
    }
}

} // namespace pcl

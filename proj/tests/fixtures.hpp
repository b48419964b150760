#pragma once

// Standard desk-scale windows per kind: generic data kept away from movable
// poles and from the singular sets, shared by the module tests and the
// acceptance suite.

#include <vector>

#include "pcl/lax.hpp"
#include "pcl/painleve.hpp"

namespace fixtures {

using namespace pcl;

struct Window {
    ParamSet params;
    CalogeroState init;
    double t_end;          // absolute end time
    std::vector<cplx> xs;  // generic spectral points in the valid domain
};

inline Window w_p1() {
    return {params_p1(), {0.0, {0.31, 0.08}, {0.12, -0.05}}, 0.35,
            {{0.7, 0.0}, {-0.4, 0.1}, {0.2, -0.3}}};
}

inline Window w_p2() {
    return {params_p2(0.7), {0.2, {0.35, 0.0}, {-0.1, 0.06}}, 0.7,
            {{0.8, 0.0}, {-0.5, 0.2}, {0.15, 0.1}}};
}

inline Window w_p2b() {
    return {params_p2({-0.3, 0.4}), {0.1, {0.52, -0.11}, {0.2, 0.0}}, 0.5,
            {{0.6, 0.1}, {-0.3, 0.0}}};
}

inline Window w_p3t() {
    return {params_p3_truncated(0.8), {0.0, {0.3, 0.05}, {-0.2, 0.0}}, 0.4,
            {{0.55, 0.0}, {-0.35, 0.1}, {0.1, 0.2}}};
}

inline Window w_p3t_b() {
    return {params_p3_truncated({0.5, 0.3}), {0.1, {0.4, -0.1}, {0.1, 0.1}}, 0.45,
            {{0.5, 0.0}, {-0.2, 0.15}}};
}

inline Window w_p3() {
    // mu = 1/2 keeps the general linear problem available
    return {params_p3(0.9, 0.5, 0.2), {0.1, {0.25, 0.0}, {0.15, -0.04}}, 0.5,
            {{0.6, 0.0}, {-0.3, 0.1}, {0.05, 0.25}}};
}

inline Window w_p3_b() {
    return {params_p3({0.7, 0.1}, -0.5, {0.1, -0.2}), {0.0, {0.35, 0.1}, {-0.1, 0.05}}, 0.4,
            {{0.45, 0.05}, {-0.25, 0.0}}};
}

inline Window w_p4() {
    return {params_p4(0.8, 0.5), {0.3, {0.7, 0.1}, {0.1, 0.0}}, 0.85,
            {{0.45, 0.0}, {1.1, 0.1}, {0.3, -0.2}}};
}

inline Window w_p4b() {
    return {params_p4({0.4, -0.3}, {-0.6, 0.2}), {0.2, {0.8, -0.05}, {-0.15, 0.1}}, 0.6,
            {{0.5, 0.1}, {1.2, 0.0}}};
}

inline Window w_p5() {
    return {params_p5_from_xi(0.25, 0.3, 0.4), {0.0, {0.6, 0.05}, {0.1, 0.0}}, 0.3,
            {{0.35, 0.0}, {0.9, 0.1}, {1.2, -0.1}}};
}

inline Window w_p5b() {
    return {params_p5_from_xi({0.15, 0.1}, {0.35, -0.05}, {0.3, 0.05}),
            {0.1, {0.7, -0.1}, {-0.05, 0.08}}, 0.4,
            {{0.4, 0.05}, {1.0, 0.0}}};
}

inline Window w_p6() {
    return {params_p6_from_xi(0.11, 0.09, 0.13, -0.90), {0.2, {0.24, 0.33}, {0.05, 0.03}},
            0.4, {{0.13, 0.22}, {0.36, 0.40}, {0.30, 0.14}}};
}

inline Window w_p6b() {
    return {params_p6_from_xi(0.17, -0.23, 0.11, -0.71), {0.22, {0.28, 0.30}, {-0.04, 0.05}},
            0.38, {{0.12, 0.20}, {0.34, 0.42}}};
}

inline std::vector<Window> all_windows() {
    return {w_p1(), w_p2(), w_p3t(), w_p3(), w_p4(), w_p5(), w_p6()};
}

inline LaxPipeline make_pipeline(const Window& w, double tol = 1e-12,
                                 AuxSeeds seeds = {}) {
    Trajectory tr = integrate(w.params, w.init, w.t_end, {.tol = tol});
    return LaxPipeline(w.params, std::move(tr), seeds);
}

inline double mid_t(const Window& w) { return 0.5 * (w.init.t + w.t_end); }

} // namespace fixtures

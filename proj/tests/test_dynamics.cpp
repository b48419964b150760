#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pcl/painleve.hpp"

using namespace pcl;
using doctest::Approx;

namespace {

// generic sample configurations per kind, kept away from movable poles
struct Setup {
    ParamSet params;
    CalogeroState init;
    double t_end;
};

std::vector<Setup> setups() {
    return {
        {params_p1(), {0.0, {0.31, 0.08}, {0.12, -0.05}}, 0.35},
        {params_p2(0.7), {0.2, {0.35, 0.0}, {-0.1, 0.06}}, 0.5},
        {params_p3_truncated(0.8), {0.0, {0.3, 0.05}, {-0.2, 0.0}}, 0.4},
        {params_p3(0.9, 0.5, 0.2), {0.1, {0.25, 0.0}, {0.15, -0.04}}, 0.45},
        {params_p4(0.8, 0.5), {0.3, {0.7, 0.1}, {0.1, 0.0}}, 0.6},
        {params_p5(0.845, -0.18, -0.2, -0.5), {0.0, {0.6, 0.05}, {0.1, 0.0}}, 0.3},
        {params_p6_from_xi(0.11, 0.09, 0.13, -0.90), {0.2, {0.24, 0.33}, {0.05, 0.03}}, 0.2},
    };
}

} // namespace

TEST_CASE("potential values") {
    // direct substitutions
    CHECK(std::abs(potential(params_p1(), 1.0, 2.0) - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(potential(params_p1(), 0.0, 5.0)) < 1e-15);
    // P2 at u=1, t=0, alpha=0: V = -1/2
    CHECK(std::abs(potential(params_p2(0.0), 1.0, 0.0) - cplx(-0.5)) < 1e-15);
}

TEST_CASE("P6 potential with equal strengths collapses to wp(2x)") {
    // sum_k wp(x + w_k) = 4 wp(2x)
    double nuv = 0.35;
    // nu0=nu1=nu2=nu3=nu: alpha=nu, beta=-nu, gamma=nu, delta=1/2-nu
    ParamSet p = params_p6(nuv, -nuv, nuv, 0.5 - nuv);
    double t = 0.2;
    ModularParam tau = p6_tau(t);
    for (cplx x : {cplx{0.21, 0.0}, cplx{0.13, 0.05}, cplx{0.37, 0.02}}) {
        cplx want = -4.0 * nuv * wp(2.0 * x, tau);
        CHECK(std::abs(potential(p, x, t) - want) < 1e-9);
    }
}

TEST_CASE("P6 parameter mappings are consistent") {
    ParamSet a = params_p6_from_xi(0.21, 0.17, 0.31, 0.13);
    const auto& pa = std::get<P6Params>(a);
    ParamSet b = params_p6(pa.alpha, pa.beta, pa.gamma, pa.delta);
    const auto& pb = std::get<P6Params>(b);
    CHECK(std::abs(pa.nu0 - pb.nu0) < 1e-14);
    CHECK(std::abs(pa.nu1 - pb.nu1) < 1e-14);
    CHECK(std::abs(pa.nu2 - pb.nu2) < 1e-14);
    CHECK(std::abs(pa.nu3 - pb.nu3) < 1e-14);
    CHECK(std::abs(pa.xi - (pa.xi0 + pa.xi1 + pa.xi2 + pa.xi3)) < 1e-14);
    // potential computed through either parameter set is identical
    for (cplx x : {cplx{0.11, 0.02}, cplx{0.29, 0.0}}) {
        CHECK(std::abs(potential(a, x, 0.2) - potential(b, x, 0.2)) < 1e-12);
    }
}

TEST_CASE("hamiltonian values") {
    CHECK(std::abs(hamiltonian(params_p1(), {0.0, 0.0, 1.0}) - cplx(0.5)) < 1e-15);
    CHECK(std::abs(hamiltonian(params_p2(0.0), {0.0, 1.0, 0.0}) - cplx(-0.5)) < 1e-15);
    // P5 parametrizations agree after the (abgd) mapping
    ParamSet from_xi = params_p5_from_xi(0.25, 0.3, 0.4);
    const auto& v = std::get<P5Params>(from_xi);
    ParamSet from_abgd = params_p5(v.alpha, v.beta, v.gamma, v.delta);
    CalogeroState s{0.1, {0.52, 0.07}, {0.2, -0.1}};
    CHECK(std::abs(hamiltonian(from_xi, s) - hamiltonian(from_abgd, s)) < 1e-14);
}

TEST_CASE("rhs equals minus the potential gradient") {
    CHECK(std::abs(rhs(params_p1(), 1.0, 2.0) - cplx(2.0)) < 1e-15);
    CHECK(std::abs(rhs(params_p2(0.0), 0.0, 1.7)) < 1e-15);
    // central differences of V, O(h^2), over a grid of states for every kind
    const double h = 1e-5;
    for (const auto& su : setups()) {
        for (int i = 0; i < 20; ++i) {
            cplx u = su.init.u + 0.02 * double(i - 10) + cplx(0.0, 0.004 * double(i % 5));
            double t = su.init.t + 0.01 * double(i % 7) + 0.05;
            cplx fd = -(potential(su.params, u + h, t) - potential(su.params, u - h, t)) / (2.0 * h);
            cplx an = rhs(su.params, u, t);
            CHECK(std::abs(fd - an) < 2e-7 * (1.0 + std::abs(an)));
        }
    }
}

TEST_CASE("P4 rhs is odd in u") {
    ParamSet p = params_p4(0.8, 0.5);
    for (cplx u : {cplx{0.7, 0.1}, cplx{0.4, -0.2}, cplx{1.1, 0.0}}) {
        CHECK(std::abs(rhs(p, u, 0.3) + rhs(p, -u, 0.3)) < 1e-13);
    }
}

TEST_CASE("integration: short-time Taylor expansion for P1") {
    ParamSet p = params_p1();
    CalogeroState init{0.4, {0.31, 0.0}, {0.12, 0.0}};
    Trajectory traj = integrate(p, init, 0.5, {.tol = 1e-12});
    double s = 1e-3;
    cplx taylor = init.u + init.du * s + (6.0 * init.u * init.u + init.t) / 8.0 * s * s;
    CHECK(std::abs(traj.at(init.t + s).u - taylor) < 1e-8);
}

TEST_CASE("integration: order-4 global convergence under step halving") {
    ParamSet p = params_p2(0.7);
    CalogeroState init{0.2, {0.35, 0.0}, {-0.1, 0.06}};
    Trajectory ref = integrate(p, init, 0.6, {.tol = 1e-13});
    cplx uref = ref.at(0.6).u;
    auto err_at = [&](double hstep) {
        Trajectory tr = integrate(p, init, 0.6, {.tol = 1e-13, .fixed_step = hstep});
        return std::abs(tr.at(0.6).u - uref);
    };
    double e1 = err_at(0.02), e2 = err_at(0.01);
    CHECK(e1 / e2 == Approx(16.0).epsilon(0.35));
}

TEST_CASE("integration: forward-backward time reversal") {
    for (const auto& su : setups()) {
        double tol = 1e-10;
        Trajectory fwd = integrate(su.params, su.init, su.init.t + su.t_end, {.tol = tol});
        CalogeroState endst = fwd.at(su.init.t + su.t_end);
        Trajectory bwd = integrate(su.params, endst, su.init.t, {.tol = tol});
        CalogeroState back = bwd.at(su.init.t);
        CHECK(std::abs(back.u - su.init.u) < 10 * tol);
        CHECK(std::abs(back.du - su.init.du) < 10 * tol);
    }
}

TEST_CASE("trajectory invariants: monotone grid and dense output") {
    ParamSet p = params_p2(0.7);
    Trajectory tr = integrate(p, {0.2, {0.35, 0.0}, {-0.1, 0.06}}, 0.7, {.tol = 1e-10});
    const auto& n = tr.nodes();
    for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i].t > n[i - 1].t);
    // dense output reproduces the nodes exactly
    CHECK(std::abs(tr.at(n[2].t).u - n[2].u) < 1e-14);
    CHECK_THROWS_AS(tr.at(0.19), std::out_of_range);
    CHECK_THROWS_AS(tr.at(0.71), std::out_of_range);
}

TEST_CASE("hamiltonian drift equals partial time derivative") {
    for (const auto& su : setups()) {
        Trajectory tr = integrate(su.params, su.init, su.init.t + su.t_end, {.tol = 1e-11});
        double tm = su.init.t + su.t_end / 2.0;
        CHECK(hamiltonian_drift_residual(su.params, tr, tm) < 1e-6);
    }
    // analytic forms of dH/dt for the first three kinds
    {
        ParamSet p = params_p1();
        Trajectory tr = integrate(p, {0.0, {0.31, 0.08}, {0.12, -0.05}}, 0.35, {.tol = 1e-12});
        double tm = 0.17;
        CalogeroState s = tr.at(tm);
        cplx dH = (hamiltonian(p, tr.at(tm + 1e-4)) - hamiltonian(p, tr.at(tm - 1e-4))) / 2e-4;
        CHECK(std::abs(dH - (-s.u / 4.0)) < 1e-6);
    }
    {
        ParamSet p = params_p2(0.7);
        Trajectory tr = integrate(p, {0.2, {0.35, 0.0}, {-0.1, 0.06}}, 0.7, {.tol = 1e-12});
        double tm = 0.45;
        CalogeroState s = tr.at(tm);
        cplx dH = (hamiltonian(p, tr.at(tm + 1e-4)) - hamiltonian(p, tr.at(tm - 1e-4))) / 2e-4;
        CHECK(std::abs(dH - (-s.u * s.u / 2.0 - tm / 4.0)) < 1e-6);
    }
    {
        ParamSet p = params_p4(0.8, 0.5);
        Trajectory tr = integrate(p, {0.3, {0.7, 0.1}, {0.1, 0.0}}, 0.9, {.tol = 1e-12});
        double tm = 0.6;
        CalogeroState s = tr.at(tm);
        cplx dH = (hamiltonian(p, tr.at(tm + 1e-4)) - hamiltonian(p, tr.at(tm - 1e-4))) / 2e-4;
        CHECK(std::abs(dH - (-std::pow(s.u, 4) / 2.0 - tm * s.u * s.u)) < 1e-6);
    }
}

TEST_CASE("original variable maps") {
    // identity rows
    ParamSet p1 = params_p1();
    OriginalVars v = to_original_variables(p1, {0.3, {0.2, 0.1}, {0.0, 0.0}});
    CHECK(v.y == cplx(0.2, 0.1));
    CHECK(v.T == cplx(0.3));
    // P4 squares the coordinate
    OriginalVars v4 = to_original_variables(params_p4(0.8, 0.5), {0.3, {0.7, 0.0}, {}});
    CHECK(std::abs(v4.y - cplx(0.49)) < 1e-15);
    CHECK_THROWS_AS(to_original_variables(params_p4(0.8, 0.5), {0.3, {0.0, 0.0}, {}}),
                    map_error);
}

TEST_CASE("original-form residuals along integrated trajectories") {
    for (const auto& su : setups()) {
        Trajectory tr = integrate(su.params, su.init, su.init.t + su.t_end, {.tol = 1e-12});
        for (double frac : {0.3, 0.5, 0.7}) {
            double t = su.init.t + frac * su.t_end;
            double r = original_form_residual(su.params, tr, t);
            INFO(kind_name(kind_of(su.params)));
            CHECK(r < 1e-5);
        }
        // P1/P2 in particular: identity map keeps the Calogero residual
        if (kind_of(su.params) == PainleveKind::P6) {
            CHECK(original_form_residual(su.params, tr, su.init.t + 0.5 * su.t_end) < 1e-6);
        }
    }
}

TEST_CASE("blow-up monitoring") {
    // P1 with large initial data runs off quickly
    ParamSet p = params_p1();
    CHECK_THROWS_AS(integrate(p, {0.0, {6.0, 0.0}, {8.0, 0.0}}, 3.0, {.tol = 1e-9}),
                    blowup_error);
    try {
        integrate(p, {0.0, {6.0, 0.0}, {8.0, 0.0}}, 3.0, {.tol = 1e-9});
    } catch (const blowup_error& e) {
        CHECK(std::isfinite(e.last.t));
        CHECK(is_finite(e.last.u));
    }
    // P4 hitting the singular line u = 0
    ParamSet p4 = params_p4(0.8, -0.5);
    CHECK_THROWS_AS(integrate(p4, {0.0, {0.05, 0.0}, {-1.0, 0.0}}, 1.0, {.tol = 1e-9}),
                    blowup_error);
}

TEST_CASE("P3 theta-form accessor") {
    P3Params ok{0.9, 0.5, 0.2};
    P3ThetaForm f = p3_theta_form(ok);
    CHECK(std::abs(f.theta + 1.0 - 0.81 * std::exp(-0.4)) < 1e-14);
    CHECK(std::abs(f.lambda + 0.25 * 0.81 * std::exp(0.4)) < 1e-14);
    CHECK(std::abs(f.chi - 1.0 / 16.0) < 1e-15);
    P3Params bad{0.9, 0.3, 0.2};
    CHECK_THROWS_AS(p3_theta_form(bad), std::invalid_argument);
}

TEST_CASE("P5 construction invariants") {
    ParamSet p = params_p5_from_xi(0.25, 0.3, 0.4);
    const auto& v = std::get<P5Params>(p);
    CHECK(std::abs(v.delta + 0.5) < 1e-15);
    CHECK(v.jm_compatible);
    ParamSet q = params_p5(1.0, -0.3, 0.2, -0.7);
    CHECK_FALSE(std::get<P5Params>(q).jm_compatible);
}

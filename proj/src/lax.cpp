#include "pcl/lax.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcl {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI{0.0, 1.0};

Mat2 traceless(cplx a, cplx b, cplx c) { return {a, b, c, -a}; }

} // namespace

LaxEval build_p1(const CalogeroState& s, cplx x) {
    Mat2 U = traceless(s.du, x - s.u, x * x + x * s.u + s.u * s.u + 0.5 * s.t);
    Mat2 V = traceless(0.0, 0.5, 0.5 * x + s.u);
    return {U, V, x, s.t};
}

LaxEval build_p2(const CalogeroState& s, const P2Params& p, cplx x) {
    cplx u = s.u, du = s.du;
    Mat2 U = traceless(x * x + du - u * u, x - u,
                       (x + u) * (2.0 * u * u - 2.0 * du + s.t) - 2.0 * p.alpha - 1.0);
    Mat2 V = traceless(0.5 * (x + u), 0.5, u * u - du + 0.5 * s.t);
    return {U, V, x, s.t};
}

LaxEval build_p3_truncated(const CalogeroState& s, const P3TruncParams& p, cplx x) {
    cplx e = p.nu * std::exp(cplx(s.t / 2.0));
    Mat2 U = traceless(s.du, 2.0 * e * std::sinh(x - s.u), 2.0 * e * std::sinh(x + s.u));
    Mat2 V = traceless(0.0, e * std::cosh(x - s.u), e * std::cosh(x + s.u));
    return {U, V, x, s.t};
}

LaxEval build_p3_general(const CalogeroState& s, const AuxP3& aux, const P3Params& p, cplx x) {
    P3ThetaForm tf = p3_theta_form(p);
    const double t = s.t;
    // f^(1/2) taken as exp((t - 2u)/2): smooth in u, consistent everywhere
    cplx fr = std::exp((cplx(t) - 2.0 * s.u) / 2.0);
    cplx sroot = fr * aux.g12; // (v g12)^(1/2) on the same branch
    cplx e2xt = std::exp(2.0 * x + t), em2xt = std::exp(-2.0 * x + t);
    cplx ex = std::exp(x), emx = std::exp(-x), emxt = std::exp(-x + t);
    cplx em3xt = std::exp(-3.0 * x + t);
    // h = fdot/(4f) + e^{2t}/(2f) + theta/2 with fdot/f = 1 - 2 du
    cplx h = (-2.0 * s.du + 1.0) / 4.0 + std::exp(cplx(2.0 * t)) / (2.0 * aux.f) +
             tf.theta / 2.0;
    Mat2 U = traceless(0.5 * e2xt - 2.0 * aux.g11 * em2xt + tf.theta + 0.5,
                       fr * ex - emxt / fr,
                       4.0 * sroot * (aux.w * emx - aux.g21 * em3xt));
    Mat2 V = traceless(0.25 * e2xt + aux.g11 * em2xt + h,
                       0.5 * (fr * ex + emxt / fr),
                       2.0 * sroot * (aux.w * emx + aux.g21 * em3xt));
    return {U, V, x, t};
}

LaxEval build_p4(const CalogeroState& s, const P4Params& p, cplx x) {
    if (std::abs(x) < 1e-10) throw pole_error("build_p4: x = 0");
    if (std::abs(s.u) < 1e-10) throw pole_error("build_p4: u = 0");
    cplx u = s.u, du = s.du;
    cplx Q = u * du - 0.5 * std::pow(u, 4) - s.t * u * u;
    Mat2 U = traceless(0.5 * x * x * x + s.t * x + (Q + 0.5) / x, x * x - u * u,
                       (Q * Q + 0.5 * p.beta) / (u * u * x * x) - Q - p.alpha - 1.0);
    Mat2 V = traceless(0.5 * (x * x + u * u) + s.t, x, -(Q + p.alpha + 1.0) / x);
    return {U, V, x, s.t};
}

LaxEval build_p5(const CalogeroState& s, const AuxP5& aux, const P5Params& p, cplx x) {
    cplx shx = std::sinh(x), chx = std::cosh(x);
    if (std::abs(shx) < 1e-10 || std::abs(chx) < 1e-10)
        throw pole_error("build_p5: sinh x or cosh x vanishes");
    if (!p.jm_compatible)
        throw std::invalid_argument("build_p5: requires delta = -1/2");
    double t = s.t;
    cplx e2t = std::exp(cplx(2.0 * t)), et = std::exp(cplx(t));
    cplx shu = std::sinh(s.u);
    cplx g = aux.g, sigma = p.sigma;
    cplx a = e2t * shx * chx + (2.0 * g + 0.5) * shx / chx -
             (2.0 * g + 2.0 * sigma - 0.5) * chx / shx;
    cplx b = 2.0 * et * (aux.v * shx * shx - aux.w * chx * chx) / (aux.v - aux.w);
    cplx c = 2.0 / et * (aux.v - aux.w) * (aux.v1 / (chx * chx) - aux.w1 / (shx * shx));
    cplx A = e2t * (chx * chx + shu * shu) - 2.0 * sigma + 0.5;
    cplx B = et * std::sinh(2.0 * x);
    cplx C = 4.0 * (aux.v - aux.w) * (aux.v1 - aux.w1) / (et * std::sinh(2.0 * x));
    return {traceless(a, b, c), traceless(A, B, C), x, t};
}

LaxEval build_p6(const CalogeroState& s, const AuxP6& aux, const P6Params& p, cplx x) {
    const ModularParam tau = p6_tau(s.t);
    const EllipticConstants ec = e_values(tau);
    const cplx e21 = ec.e2 - ec.e1;
    const cplx T = aux.T;

    cplx wpx = wp(x, tau), wpxp = wp_prime(x, tau);
    cplx X = (wpx - ec.e1) / e21;
    cplx d0 = X, d1 = X - 1.0, d2 = X - T;
    if (std::min({std::abs(d0), std::abs(d1), std::abs(d2)}) < 1e-9)
        throw pole_error("build_p6: x at a half-period pole of the rational pair");

    cplx Xx = wpxp / e21;
    cplx L0x = theta_dz(0, x, tau, 1) / theta(0, x, tau);
    cplx Xt = Xx * L0x;
    cplx Tt = 2.0 * e21 * T * (T - 1.0);

    cplx sa = (aux.g0 + p.xi0) / d0 + (aux.g1 + p.xi1) / d1 + (aux.g2 + p.xi2) / d2;
    cplx sb = -(aux.u0g0 / d0 + aux.u1g1 / d1 + aux.u2g2 / d2);
    cplx sc = aux.g0 * (aux.g0 + 2.0 * p.xi0) / (aux.u0g0 * d0) +
              aux.g1 * (aux.g1 + 2.0 * p.xi1) / (aux.u1g1 * d1) +
              aux.g2 * (aux.g2 + 2.0 * p.xi2) / (aux.u2g2 * d2);
    cplx sA = -(aux.g2 + p.xi2) / d2;
    cplx sB = aux.u2g2 / d2;
    cplx sC = -aux.g2 * (aux.g2 + 2.0 * p.xi2) / (aux.u2g2 * d2);

    Mat2 Ut = traceless(Xx * sa, Xx * sb, Xx * sc);
    Mat2 Vt = traceless(Tt * sA + Xt * sa, Tt * sB + Xt * sb, Tt * sC + Xt * sc);

    // diagonal gauge: omega^2 in theta-constant form, dx log omega in the
    // Eisenstein form, dt log omega through the heat-equation identities
    cplx th1p0 = theta_dz(1, 0.0, tau, 1);
    cplx th1u = theta(1, s.u, tau);
    cplx th00 = theta(0, 0.0, tau);
    // rho = theta1'(0)^(1/3) theta1(u) / (sqrt(K) theta0^3(0)); the extra
    // theta0(0)^-3 against the bare form makes the x-independent part of the
    // Schroedinger potential equal the classical Hamiltonian exactly, and
    // the overall sign makes omega^2 agree with its wp-quotient form
    cplx w2 = -std::pow(th1p0, 5.0 / 3.0) * th00 /
              (theta(2, 0.0, tau) * theta(3, 0.0, tau) * std::pow(th00, 6)) *
              theta(2, x, tau) * theta(3, x, tau) *
              theta(0, x, tau) * th1u * th1u / (theta(1, x, tau) * aux.K);

    HalfPeriods hp = half_periods(tau);
    cplx gx = -eisenstein_E1(x, tau);
    const cplx ws[3] = {hp.w1, hp.w2, hp.w3};
    for (const cplx& w : ws)
        gx += eisenstein_E1(x + w, tau) - eisenstein_E1(w, tau);
    gx *= 0.5;

    cplx wpu = wp(s.u, tau);
    cplx E1u = eisenstein_E1(s.u, tau);
    cplx E2u = wpu + 2.0 * ec.eta;
    cplx dtlogrho = -ec.eta + s.du * E1u + 0.5 * (E1u * E1u - E2u) +
                    (2.0 * p.xi + 1.0) * (wpu - ec.e3);
    cplx dxlog_ratio = wp_second(x, tau) / wpxp - wpxp / (wpx - ec.e3);
    // the constant term carries dt log theta0(0)^-3 = 3(e3 + 2 eta)/2 on
    // top of -e3 - 2 eta, leaving e3/2 + eta
    cplx gt = 0.5 * dxlog_ratio * L0x + 0.5 * L0x * L0x + dtlogrho + 0.5 * ec.e3 + ec.eta;

    Mat2 U = traceless(Ut.a + gx, Ut.b * w2, Ut.c / w2);
    Mat2 V = traceless(Vt.a + gt, Vt.b * w2, Vt.c / w2);
    return {U, V, x, s.t};
}

// ---------------------------------------------------------------------------

bool LaxPipeline::has_aux() const {
    PainleveKind k = kind();
    return k == PainleveKind::P3 || k == PainleveKind::P5 || k == PainleveKind::P6;
}

LaxPipeline::LaxPipeline(ParamSet params, Trajectory traj, AuxSeeds seeds)
    : params_(std::move(params)), traj_(std::move(traj)), seeds_(seeds) {
    if (has_aux()) build_aux_table();
}

void LaxPipeline::build_aux_table() {
    // d/dt log(scale) as an explicit function of the dense state
    auto phi = [&](double t) -> cplx {
        CalogeroState s = traj_.at(t);
        switch (kind()) {
            case PainleveKind::P3: {
                P3ThetaForm tf = p3_theta_form(std::get<P3Params>(params_));
                cplx f = std::exp(-2.0 * s.u + cplx(t));
                cplx fdot = (-2.0 * s.du + 1.0) * f;
                cplx g = (fdot + 2.0 * tf.theta * f + std::exp(cplx(2.0 * t))) / (4.0 * f * f);
                return tf.theta - 4.0 * f * g;
            }
            case PainleveKind::P5: {
                const auto& p = std::get<P5Params>(params_);
                cplx sh = std::sinh(s.u), ch = std::cosh(s.u);
                cplx y = (ch * ch) / (sh * sh);
                cplx g = -0.5 * s.du * sh * ch +
                         0.5 * std::exp(cplx(2.0 * t)) * sh * sh * ch * ch -
                         p.sigma * ch * ch;
                return -4.0 * (y - 1.0) / y * g;
            }
            case PainleveKind::P6: {
                const auto& p = std::get<P6Params>(params_);
                ModularParam tau = p6_tau(t);
                EllipticConstants ec = e_values(tau);
                return -2.0 * (2.0 * p.xi + 1.0) * (wp(s.u, tau) - ec.e3);
            }
            default:
                return 0.0;
        }
    };

    const auto& nodes = traj_.nodes();
    ts_.reserve(nodes.size());
    logscale_.reserve(nodes.size());
    dlogscale_.reserve(nodes.size());
    cplx acc = 0.0;
    cplx phi_prev = phi(nodes.front().t);
    ts_.push_back(nodes.front().t);
    logscale_.push_back(acc);
    dlogscale_.push_back(phi_prev);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        double t0 = nodes[i - 1].t, t1 = nodes[i].t;
        double hseg = t1 - t0;
        cplx phi_mid = phi(0.5 * (t0 + t1));
        cplx phi_next = phi(t1);
        acc += hseg / 6.0 * (phi_prev + 4.0 * phi_mid + phi_next); // Simpson
        ts_.push_back(t1);
        logscale_.push_back(acc);
        dlogscale_.push_back(phi_next);
        phi_prev = phi_next;
    }
}

cplx LaxPipeline::logscale_at(double t) const {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t i1 = std::min<std::size_t>(ts_.size() - 1,
                                           std::max<std::size_t>(1, it - ts_.begin()));
    double t0 = ts_[i1 - 1], t1 = ts_[i1];
    double h = t1 - t0, s = std::clamp((t - t0) / h, -0.5, 1.5);
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * logscale_[i1 - 1] + (s3 - 2 * s2 + s) * h * dlogscale_[i1 - 1] +
           (-2 * s3 + 3 * s2) * logscale_[i1] + (s3 - s2) * h * dlogscale_[i1];
}

AuxP3 LaxPipeline::aux_p3(double t) const {
    if (kind() != PainleveKind::P3) throw std::logic_error("aux_p3: wrong kind");
    P3ThetaForm tf = p3_theta_form(std::get<P3Params>(params_));
    CalogeroState s = traj_.at(t);
    AuxP3 a;
    a.f = std::exp(-2.0 * s.u + cplx(t));
    if (std::abs(a.f) < 1e-300) throw degeneracy_error("aux_p3: f vanished");
    cplx fdot = (-2.0 * s.du + 1.0) * a.f;
    a.g11 = (fdot + 2.0 * tf.theta * a.f + std::exp(cplx(2.0 * t))) / (4.0 * a.f * a.f);
    a.g12 = seeds_.g12_0 * std::exp(logscale_at(t));
    if (std::abs(a.g12) < 1e-300) throw degeneracy_error("aux_p3: g12 vanished");
    a.v = a.f * a.g12;
    a.g21 = (tf.chi - a.g11 * a.g11) / a.g12;
    a.w = (tf.lambda - tf.theta * a.g11 - a.v * a.g21) / a.g12;
    return a;
}

AuxP5 LaxPipeline::aux_p5(double t) const {
    if (kind() != PainleveKind::P5) throw std::logic_error("aux_p5: wrong kind");
    const auto& p = std::get<P5Params>(params_);
    if (!p.jm_compatible)
        throw std::invalid_argument("aux_p5: requires delta = -1/2");
    CalogeroState s = traj_.at(t);
    cplx sh = std::sinh(s.u), ch = std::cosh(s.u);
    if (std::abs(sh) < 1e-10 || std::abs(ch) < 1e-10)
        throw degeneracy_error("aux_p5: u at a zero of sinh or cosh");
    AuxP5 a;
    a.y = (ch * ch) / (sh * sh);
    a.g = -0.5 * s.du * sh * ch + 0.5 * std::exp(cplx(2.0 * t)) * sh * sh * ch * ch -
          p.sigma * ch * ch;
    a.v = seeds_.v_0 * std::exp(logscale_at(t));
    if (std::abs(a.v) < 1e-300) throw degeneracy_error("aux_p5: v vanished");
    a.w = a.v / a.y;
    cplx zeta2 = -p.beta / 2.0;
    cplx xi2_2xisigma = p.alpha / 2.0 - p.sigma * p.sigma; // xi^2 + 2 xi sigma
    a.v1 = (zeta2 - a.g * a.g) / a.v;
    a.w1 = (xi2_2xisigma - a.g * a.g - 2.0 * p.sigma * a.g) / a.w;
    return a;
}

AuxP6 LaxPipeline::aux_p6(double t) const {
    if (kind() != PainleveKind::P6) throw std::logic_error("aux_p6: wrong kind");
    const auto& p = std::get<P6Params>(params_);
    if (std::abs(p.xi) < 1e-12)
        throw degeneracy_error("aux_p6: residue formulas need 2 xi != 0");
    CalogeroState s = traj_.at(t);
    ModularParam tau = p6_tau(t);
    EllipticConstants ec = e_values(tau);
    cplx e21 = ec.e2 - ec.e1;

    AuxP6 a;
    a.T = (ec.e3 - ec.e1) / e21;
    cplx wpu = wp(s.u, tau);
    cplx wpup = wp_prime(s.u, tau);
    cplx L0u = theta_dz(0, s.u, tau, 1) / theta(0, s.u, tau);
    a.y = (wpu - ec.e1) / e21;
    const cplx T = a.T, y = a.y;
    if (std::min({std::abs(y), std::abs(y - 1.0), std::abs(y - T)}) < 1e-10)
        throw degeneracy_error("aux_p6: y hit one of {0, 1, T}");
    a.yT = wpup * (s.du + L0u) / (2.0 * T * (T - 1.0) * e21 * e21);
    a.z = 0.5 * (T * (T - 1.0) * a.yT / (y * (y - 1.0) * (y - T)) - 1.0 / (y - T));

    // residue form of the g_i
    const cplx xi = p.xi, xi0 = p.xi0, xi1 = p.xi1, xi2 = p.xi2;
    const cplx yT = a.yT;
    cplx xph2 = (xi + 0.5) * (xi + 0.5);
    cplx G0 = (T - 1.0) / 4.0 - xi * (xi * T + xi + 1.0);
    cplx G1 = (T - 1.0) / 4.0 - xi * xi * (T - 1.0);
    cplx G2 = (T - 1.0) / 4.0 + xi * (xi + 1.0) * (T - 1.0);
    cplx q0 = (T - 1.0) * (T - 1.0) * yT * yT / 4.0;
    cplx q1 = T * T * yT * yT / 4.0;
    cplx q2 = (yT - 1.0) * (yT - 1.0) / 4.0;

    cplx r0 = -xph2 / T * y - G0 / T -
              (q0 - xi * (T - 1.0) * yT + xi0 * (2.0 * xi - xi0)) / y +
              (T - 1.0) / (T * (y - 1.0)) * (q1 - xi1 * xi1) -
              (T - 1.0) / (y - T) * (q2 - xi2 * xi2);
    cplx r1 = xph2 / (T - 1.0) * y + G1 / (T - 1.0) +
              T / ((T - 1.0) * y) * (q0 - xi0 * xi0) +
              (-q1 - xi * T * yT + xi1 * (xi1 - 2.0 * xi)) / (y - 1.0) +
              T / (y - T) * (q2 - xi2 * xi2);
    cplx r2 = -xph2 / (T * (T - 1.0)) * y - G2 / (T * (T - 1.0)) -
              (q0 - xi0 * xi0) / ((T - 1.0) * y) + (q1 - xi1 * xi1) / (T * (y - 1.0)) -
              (q2 - xi * (yT - 1.0) + xi2 * (2.0 * xi - xi2)) / (y - T);

    a.g0 = y * r0 / (2.0 * xi);
    a.g1 = (y - 1.0) * r1 / (2.0 * xi);
    a.g2 = (y - T) * r2 / (2.0 * xi);

    a.K = seeds_.K_0 * std::exp(logscale_at(t));
    a.u0g0 = a.K * y / T;
    a.u1g1 = -a.K * (y - 1.0) / (T - 1.0);
    a.u2g2 = a.K * (y - T) / (T * (T - 1.0));
    auto safe_div = [](cplx num, cplx den, const char* what) {
        if (std::abs(den) < 1e-13 * (1.0 + std::abs(num)))
            throw degeneracy_error(what);
        return num / den;
    };
    a.u0 = safe_div(a.u0g0, a.g0, "aux_p6: g0 vanished");
    a.u1 = safe_div(a.u1g1, a.g1, "aux_p6: g1 vanished");
    a.u2 = safe_div(a.u2g2, a.g2, "aux_p6: g2 vanished");
    return a;
}

LaxEval LaxPipeline::eval(cplx x, double t) const {
    CalogeroState s = traj_.at(t);
    switch (kind()) {
        case PainleveKind::P1: return build_p1(s, x);
        case PainleveKind::P2: return build_p2(s, std::get<P2Params>(params_), x);
        case PainleveKind::P3Truncated:
            return build_p3_truncated(s, std::get<P3TruncParams>(params_), x);
        case PainleveKind::P3:
            return build_p3_general(s, aux_p3(t), std::get<P3Params>(params_), x);
        case PainleveKind::P4: return build_p4(s, std::get<P4Params>(params_), x);
        case PainleveKind::P5: return build_p5(s, aux_p5(t), std::get<P5Params>(params_), x);
        case PainleveKind::P6: return build_p6(s, aux_p6(t), std::get<P6Params>(params_), x);
    }
    throw std::logic_error("unreachable");
}

Mat2 LaxPipeline::dUdx(cplx x, double t) const {
    CalogeroState s = traj_.at(t);
    switch (kind()) {
        case PainleveKind::P1:
            return traceless(0.0, 1.0, 2.0 * x + s.u);
        case PainleveKind::P2:
            return traceless(2.0 * x, 1.0, 2.0 * s.u * s.u - 2.0 * s.du + s.t);
        case PainleveKind::P3Truncated: {
            cplx e = std::get<P3TruncParams>(params_).nu * std::exp(cplx(t / 2.0));
            return traceless(0.0, 2.0 * e * std::cosh(x - s.u), 2.0 * e * std::cosh(x + s.u));
        }
        case PainleveKind::P3: {
            AuxP3 a = aux_p3(t);
            cplx fr = std::exp((cplx(t) - 2.0 * s.u) / 2.0);
            cplx sroot = fr * a.g12;
            return traceless(std::exp(2.0 * x + t) + 4.0 * a.g11 * std::exp(-2.0 * x + t),
                             fr * std::exp(x) + (1.0 / fr) * std::exp(-x + t),
                             4.0 * sroot * (-a.w * std::exp(-x) +
                                            3.0 * a.g21 * std::exp(-3.0 * x + t)));
        }
        case PainleveKind::P4: {
            cplx u = s.u;
            cplx Q = u * s.du - 0.5 * std::pow(u, 4) - t * u * u;
            const auto& p = std::get<P4Params>(params_);
            return traceless(1.5 * x * x + t - (Q + 0.5) / (x * x), 2.0 * x,
                             -2.0 * (Q * Q + 0.5 * p.beta) / (u * u * x * x * x));
        }
        case PainleveKind::P5: {
            AuxP5 a = aux_p5(t);
            const auto& p = std::get<P5Params>(params_);
            cplx shx = std::sinh(x), chx = std::cosh(x);
            cplx e2t = std::exp(cplx(2.0 * t)), et = std::exp(cplx(t));
            cplx da = e2t * std::cosh(2.0 * x) + (2.0 * a.g + 0.5) / (chx * chx) +
                      (2.0 * a.g + 2.0 * p.sigma - 0.5) / (shx * shx);
            cplx db = 2.0 * et * std::sinh(2.0 * x);
            cplx dc = 2.0 / et * (a.v - a.w) *
                      (-2.0 * a.v1 * shx / (chx * chx * chx) +
                       2.0 * a.w1 * chx / (shx * shx * shx));
            return traceless(da, db, dc);
        }
        case PainleveKind::P6:
            return fd_dUdx(*this, x, t, 1e-4);
    }
    throw std::logic_error("unreachable");
}

Mat2 LaxPipeline::dVdx(cplx x, double t) const {
    CalogeroState s = traj_.at(t);
    switch (kind()) {
        case PainleveKind::P1:
            return traceless(0.0, 0.0, 0.5);
        case PainleveKind::P2:
            return traceless(0.5, 0.0, 0.0);
        case PainleveKind::P3Truncated: {
            cplx e = std::get<P3TruncParams>(params_).nu * std::exp(cplx(t / 2.0));
            return traceless(0.0, e * std::sinh(x - s.u), e * std::sinh(x + s.u));
        }
        case PainleveKind::P3: {
            AuxP3 a = aux_p3(t);
            cplx fr = std::exp((cplx(t) - 2.0 * s.u) / 2.0);
            cplx sroot = fr * a.g12;
            return traceless(0.5 * std::exp(2.0 * x + t) - 2.0 * a.g11 * std::exp(-2.0 * x + t),
                             0.5 * (fr * std::exp(x) - (1.0 / fr) * std::exp(-x + t)),
                             2.0 * sroot * (-a.w * std::exp(-x) -
                                            3.0 * a.g21 * std::exp(-3.0 * x + t)));
        }
        case PainleveKind::P4: {
            cplx u = s.u;
            cplx Q = u * s.du - 0.5 * std::pow(u, 4) - t * u * u;
            const auto& p = std::get<P4Params>(params_);
            return traceless(x, 1.0, (Q + p.alpha + 1.0) / (x * x));
        }
        case PainleveKind::P5: {
            AuxP5 a = aux_p5(t);
            cplx e2t = std::exp(cplx(2.0 * t)), et = std::exp(cplx(t));
            cplx s2x = std::sinh(2.0 * x), c2x = std::cosh(2.0 * x);
            return traceless(e2t * s2x, 2.0 * et * c2x,
                             -8.0 * (a.v - a.w) * (a.v1 - a.w1) * c2x / (et * s2x * s2x));
        }
        case PainleveKind::P6:
            return fd_dVdx(*this, x, t, 1e-4);
    }
    throw std::logic_error("unreachable");
}

LaxPipeline LaxPipeline::perturbed(cplx du_offset) const {
    return LaxPipeline(params_, traj_.perturbed(du_offset), seeds_);
}

// ---------------------------------------------------------------------------

namespace {

// 4th-order five-point first derivative of a Mat2-valued function
template <typename F>
Mat2 stencil5(F&& f, double h) {
    Mat2 m2 = f(-2.0 * h), m1 = f(-h), p1 = f(h), p2 = f(2.0 * h);
    return (1.0 / (12.0 * h)) * (m2 - p2 + 8.0 * (p1 - m1));
}

} // namespace

Mat2 fd_dUdx(const LaxSystem& sys, cplx x, double t, double h) {
    return stencil5([&](double d) { return sys.U(x + d, t); }, h);
}

Mat2 fd_dVdx(const LaxSystem& sys, cplx x, double t, double h) {
    return stencil5([&](double d) { return sys.V(x + d, t); }, h);
}

Mat2 fd_dUdt(const LaxSystem& sys, cplx x, double t, double h) {
    return stencil5([&](double d) { return sys.U(x, t + d); }, h);
}

Mat2 GaugedLaxSystem::U(cplx x, double t) const {
    Mat2 u = base_.U(x, t);
    cplx lg = gauge_.log_omega(x, t);
    cplx w2 = std::exp(2.0 * lg);
    return traceless(u.a + gauge_.dlog_dx(x, t), u.b * w2, u.c / w2);
}

Mat2 GaugedLaxSystem::V(cplx x, double t) const {
    Mat2 v = base_.V(x, t);
    cplx lg = gauge_.log_omega(x, t);
    cplx w2 = std::exp(2.0 * lg);
    return traceless(v.a + gauge_.dlog_dt(x, t), v.b * w2, v.c / w2);
}

ZeroCurvatureReport zero_curvature_residual(const LaxPipeline& pl, cplx x, double t,
                                            double h_t, double h_x) {
    auto resid = [&](double ht) {
        Mat2 Up = pl.U(x, t + ht), Um = pl.U(x, t - ht);
        Mat2 dUdt = (1.0 / (2.0 * ht)) * (Up - Um);
        Mat2 dVdx = pl.dVdx(x, t);
        Mat2 U0 = pl.U(x, t), V0 = pl.V(x, t);
        return frobenius_norm(dUdt - dVdx + commutator(U0, V0));
    };
    (void)h_x;
    double r = resid(h_t);
    double rh = resid(h_t / 2.0);
    double order = (rh > 0.0) ? std::log2(r / rh) : 0.0;
    return {kind_name(pl.kind()), x, t, h_t, r, rh, order};
}

double zero_curvature_residual_fd(const LaxSystem& sys, cplx x, double t, double h_t,
                                  double h_x) {
    Mat2 dUdt = fd_dUdt(sys, x, t, h_t);
    Mat2 dVdx = fd_dVdx(sys, x, t, h_x);
    Mat2 U0 = sys.U(x, t), V0 = sys.V(x, t);
    return frobenius_norm(dUdt - dVdx + commutator(U0, V0));
}

std::string to_json(const ZeroCurvatureReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"kind\":\"" << r.kind << "\",\"x\":[" << r.x.real() << "," << r.x.imag()
       << "],\"t\":" << r.t << ",\"h\":" << r.h << ",\"residual\":" << r.residual
       << ",\"halved_residual\":" << r.halved_residual
       << ",\"order_estimate\":" << r.order_estimate << "}";
    return os.str();
}

} // namespace pcl

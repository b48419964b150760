#include "pcl/correspondence.hpp"

#include <cmath>
#include <sstream>

namespace pcl {

ParamSet shift_params(const ParamSet& p) {
    switch (kind_of(p)) {
        case PainleveKind::P1:
        case PainleveKind::P2:
        case PainleveKind::P3Truncated:
        case PainleveKind::P3:
            return p;
        case PainleveKind::P4: {
            const auto& v = std::get<P4Params>(p);
            return params_p4(v.alpha, v.beta + 0.5);
        }
        case PainleveKind::P5: {
            const auto& v = std::get<P5Params>(p);
            return params_p5(v.alpha - 0.125, v.beta + 0.125, v.gamma, v.delta);
        }
        case PainleveKind::P6: {
            const auto& v = std::get<P6Params>(p);
            return params_p6(v.alpha - 0.125, v.beta + 0.125, v.gamma - 0.125,
                             v.delta + 0.125);
        }
    }
    throw std::logic_error("unreachable");
}

cplx schrodinger_potential(const LaxEval& lax, cplx a_x) {
    return 0.5 * lax.U.det() - 0.5 * a_x + lax.V.a;
}

SeparationReport separation_check(const LaxPipeline& pl, double t,
                                  const std::vector<cplx>& x_grid, bool apply_shift) {
    SeparationReport rep;
    rep.kind = kind_name(pl.kind());
    rep.t = t;
    rep.grid_size = x_grid.size();
    rep.shift_applied = apply_shift;
    CalogeroState s = pl.trajectory().at(t);
    rep.H_classical = hamiltonian(pl.params(), s);
    ParamSet target = apply_shift ? shift_params(pl.params()) : pl.params();

    cplx dev_sum = 0.0, hx_sum = 0.0;
    for (cplx x : x_grid) {
        LaxEval lax = pl.eval(x, t);
        cplx upot = schrodinger_potential(lax, pl.dUdx(x, t).a);
        cplx vsh = potential(target, x, t);
        cplx dev = upot + rep.H_classical - vsh;
        rep.max_dev = std::max(rep.max_dev, std::abs(dev));
        dev_sum += dev;
        hx_sum += vsh - upot;
    }
    rep.offset = dev_sum / double(x_grid.size());
    rep.H_extracted = hx_sum / double(x_grid.size());
    return rep;
}

namespace {

void put_params(std::ostringstream& os, const ParamSet& p) {
    auto c = [&](const char* k, cplx v, bool comma = true) {
        os << "\"" << k << "\":[" << v.real() << "," << v.imag() << "]";
        if (comma) os << ",";
    };
    os << "{";
    switch (kind_of(p)) {
        case PainleveKind::P1: break;
        case PainleveKind::P2: c("alpha", std::get<P2Params>(p).alpha, false); break;
        case PainleveKind::P3Truncated: c("nu", std::get<P3TruncParams>(p).nu, false); break;
        case PainleveKind::P3: {
            const auto& v = std::get<P3Params>(p);
            c("nu", v.nu); c("mu", v.mu); c("rho", v.rho, false);
            break;
        }
        case PainleveKind::P4: {
            const auto& v = std::get<P4Params>(p);
            c("alpha", v.alpha); c("beta", v.beta, false);
            break;
        }
        case PainleveKind::P5: {
            const auto& v = std::get<P5Params>(p);
            c("alpha", v.alpha); c("beta", v.beta); c("gamma", v.gamma);
            c("delta", v.delta, false);
            break;
        }
        case PainleveKind::P6: {
            const auto& v = std::get<P6Params>(p);
            c("alpha", v.alpha); c("beta", v.beta); c("gamma", v.gamma);
            c("delta", v.delta, false);
            break;
        }
    }
    os << "}";
}

} // namespace

std::string to_json(const SeparationReport& r, const ParamSet& params,
                    const ParamSet& shifted) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"kind\":\"" << r.kind << "\",\"t\":" << r.t << ",\"params\":";
    put_params(os, params);
    os << ",\"shifted_params\":";
    put_params(os, shifted);
    os << ",\"max_dev\":" << r.max_dev << ",\"offset\":[" << r.offset.real() << ","
       << r.offset.imag() << "],\"grid_size\":" << r.grid_size << "}";
    return os.str();
}

namespace {

// five-point 4th-order first derivative and seven-point 4th-order third
// derivative of a complex function of a real offset
template <typename F>
cplx d1_stencil(F&& f, double h) {
    return (f(-2.0 * h) - f(2.0 * h) + 8.0 * (f(h) - f(-h))) / (12.0 * h);
}

template <typename F>
cplx d3_stencil(F&& f, double h) {
    return (f(-3.0 * h) - 8.0 * f(-2.0 * h) + 13.0 * f(-h) - 13.0 * f(h) + 8.0 * f(2.0 * h) -
            f(3.0 * h)) /
           (8.0 * h * h * h);
}

struct WPieces {
    cplx W, checkW, Lambda;
};

WPieces w_pieces(const LaxPipeline& pl, cplx x, double t, double h_t) {
    LaxEval lax = pl.eval(x, t);
    cplx b = lax.U.b;
    cplx upot = schrodinger_potential(lax, pl.dUdx(x, t).a);
    auto btd = [&](double hh) { return (pl.U(x, t + hh).b - pl.U(x, t - hh).b) / (2.0 * hh); };
    cplx bt = (4.0 * btd(h_t / 2.0) - btd(h_t)) / 3.0;
    cplx bx = pl.dUdx(x, t).b;
    double hx = 1e-3;
    cplx bxx = (-pl.U(x + 2 * hx, t).b + 16.0 * pl.U(x + hx, t).b - 30.0 * b +
                16.0 * pl.U(x - hx, t).b - pl.U(x - 2 * hx, t).b) /
               (12.0 * hx * hx);
    WPieces out;
    out.W = upot - bt / (2.0 * b) + bxx / (4.0 * b);
    cplx dxlogb = bx / b;
    cplx dxxlogb = bxx / b - dxlogb * dxlogb;
    out.checkW = out.W + 0.25 * dxxlogb - 0.125 * dxlogb * dxlogb;
    out.Lambda = 0.5 * dxlogb;
    return out;
}

} // namespace

StationaryReport stationary_reduction(const LaxPipeline& pl, cplx x, double t, double h_t) {
    if (std::abs(pl.U(x, t).b) < 1e-8)
        throw degeneracy_error("stationary_reduction: x too close to a zero of b");
    WPieces p0 = w_pieces(pl, x, t, h_t);
    StationaryReport rep;
    rep.W = p0.W;
    rep.checkW = p0.checkW;
    rep.Lambda = p0.Lambda;

    // Lambda behaves like 1/(2(x-u)) near the apparent singularity, so its
    // third x-derivative is stencil-hostile; one Richardson step pushes the
    // x-truncation well below the time-difference truncation.
    const double hx = 5e-3;
    auto lam = [&](double d) { return w_pieces(pl, x + d, t, h_t).Lambda; };
    auto chw = [&](double d) { return w_pieces(pl, x + d, t, h_t).checkW; };
    cplx dx_Lambda = (16.0 * d1_stencil(lam, hx / 2.0) - d1_stencil(lam, hx)) / 15.0;
    cplx dx_checkW = (16.0 * d1_stencil(chw, hx / 2.0) - d1_stencil(chw, hx)) / 15.0;
    cplx dx3_Lambda = (16.0 * d3_stencil(lam, hx / 2.0) - d3_stencil(lam, hx)) / 15.0;
    auto fg = [&](double ht) {
        cplx dt_checkW =
            (w_pieces(pl, x, t + ht, h_t).checkW - w_pieces(pl, x, t - ht, h_t).checkW) /
            (2.0 * ht);
        return std::abs(dt_checkW - 2.0 * p0.checkW * dx_Lambda - p0.Lambda * dx_checkW -
                        0.25 * dx3_Lambda);
    };
    rep.fg_residual = fg(1e-3);
    rep.fg_residual_halved = fg(0.5e-3);
    return rep;
}

cplx locate_u_from_b(const LaxSystem& sys, double t, cplx box_center, double box_half) {
    auto b_of = [&](cplx x) { return sys.U(x, t).b; };

    // argument-principle count over the box boundary
    const int per_edge = 256;
    cplx corners[5] = {box_center + cplx(-box_half, -box_half),
                       box_center + cplx(box_half, -box_half),
                       box_center + cplx(box_half, box_half),
                       box_center + cplx(-box_half, box_half),
                       box_center + cplx(-box_half, -box_half)};
    double winding = 0.0;
    cplx prev = b_of(corners[0]);
    for (int e = 0; e < 4; ++e) {
        for (int k = 1; k <= per_edge; ++k) {
            cplx z = corners[e] + (double(k) / per_edge) * (corners[e + 1] - corners[e]);
            cplx val = b_of(z);
            winding += std::arg(val / prev);
            prev = val;
        }
    }
    long zeros = std::lround(winding / (2.0 * 3.141592653589793238462643383279502884));
    if (zeros != 1)
        throw ambiguity_error("locate_u_from_b: box contains " + std::to_string(zeros) +
                              " zeros, expected exactly 1");

    cplx x = box_center;
    const double hd = 1e-4 * std::max(1.0, box_half);
    for (int it = 0; it < 50; ++it) {
        cplx f = b_of(x);
        cplx fp = d1_stencil([&](double d) { return b_of(x + d); }, hd);
        cplx step = f / fp;
        x -= step;
        if (std::abs(step) < 1e-12 * (1.0 + std::abs(x))) return x;
    }
    throw convergence_error("locate_u_from_b: Newton did not converge in 50 steps");
}

} // namespace pcl

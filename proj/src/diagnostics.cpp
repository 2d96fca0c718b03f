#include "mhdsim/diagnostics.hpp"

#include <cmath>

#include "mhdsim/elliptic.hpp"
#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

// a . grad(b) with precomputed gradient
BulkField advect(const BulkVector& a, const BulkVector& grad_b) {
    BulkField out = ops::multiply(a[0], grad_b[0]);
    out += ops::multiply(a[1], grad_b[1]);
    out += ops::multiply(a[2], grad_b[2]);
    return out;
}

InterfaceField directional(const InterfaceField& a1, const InterfaceField& a2,
                           const InterfaceField& g) {
    return spectral::multiply(a1, spectral::fourier_derivative(g, 1, 1)) +
           spectral::multiply(a2, spectral::fourier_derivative(g, 2, 1));
}

} // namespace

std::pair<InterfaceField, double> stability_lambda(const InterfaceField& h1,
                                                   const InterfaceField& h2,
                                                   const InterfaceField& hh1,
                                                   const InterfaceField& hh2) {
    InterfaceField out(h1.grid_size());
    double lmin = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < out.size(); ++k) {
        const double a = h1[k] * h1[k] + hh1[k] * hh1[k];
        const double b = h1[k] * h2[k] + hh1[k] * hh2[k];
        const double d = h2[k] * h2[k] + hh2[k] * hh2[k];
        const double tr = a + d;
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (a * d - b * b)));
        out[k] = 0.5 * (tr - disc);
        lmin = std::min(lmin, out[k]);
    }
    return {out, lmin};
}

double energy_Es(const InterfaceField& fbar, const InterfaceField& dtfbar,
                 const CoefficientFreeze& fr, double s) {
    InterfaceField dsf = spectral::sobolev_weight(fbar, s - 0.5);
    InterfaceField dst = spectral::sobolev_weight(dtfbar, s - 0.5);
    const double transported = spectral::hs_norm(dst + directional(fr.u1, fr.u2, dsf), 0.0);
    const double along_h = spectral::hs_norm(directional(fr.h1, fr.h2, dsf), 0.0);
    const double along_hh = spectral::hs_norm(directional(fr.hh1, fr.hh2, dsf), 0.0);
    return transported * transported + 0.5 * along_h * along_h + 0.5 * along_hh * along_hh;
}

double energy_calEs(const InterfaceField& fbar, const InterfaceField& dtfbar, double s) {
    const double nf = spectral::hs_norm(fbar, s + 0.5);
    const double nt = spectral::hs_norm(dtfbar, s - 0.5);
    return nf * nf + nt * nt;
}

InterfaceResiduals interface_residuals(const PlasmaVacuumState& state,
                                       const RecoveredFields& rec, const MapPair& maps) {
    InterfaceResiduals r;
    InterfaceField hh2(maps.plus.n);
    for (int c = 0; c < 3; ++c) {
        InterfaceField t = ops::trace_on_interface(rec.hhat[c]);
        hh2 += spectral::multiply(t, t);
    }
    r.pressure_balance =
        spectral::max_abs(ops::trace_on_interface(rec.p) - 0.5 * hh2);
    r.h_normal = spectral::max_abs(ops::normal_component(rec.h, maps.minus));
    r.hhat_normal = spectral::max_abs(ops::normal_component(rec.hhat, maps.plus));
    r.kinematic =
        spectral::max_abs(state.theta - ops::normal_component(rec.u, maps.minus));
    return r;
}

std::pair<double, double> divergence_persistence(const BulkVector& omega,
                                                 const BulkVector& j,
                                                 const CoordinateMap& map) {
    return {ops::bulk_max(ops::divergence(omega, map)),
            ops::bulk_max(ops::divergence(j, map))};
}

LimitResiduals limit_residuals(const std::vector<PlasmaVacuumState>& states,
                               const DynamicsContext& ctx) {
    if (states.size() < 3)
        throw InsufficientHistory("limit residuals need at least three samples");
    const size_t c = states.size() / 2;
    const double dt = states[c + 1].time - states[c].time;
    if (dt <= 0.0)
        throw InsufficientHistory("samples must carry increasing times");

    MapPair maps = build_maps(states[c].f, ctx.fstar, ctx.c0, ctx.m);
    RecoveredFields rec = recover_all(states[c], maps, ctx.current, ctx.tol);
    MapPair ml = build_maps(states[c - 1].f, ctx.fstar, ctx.c0, ctx.m);
    RecoveredFields rl = recover_all(states[c - 1], ml, ctx.current, ctx.tol);
    MapPair mr = build_maps(states[c + 1].f, ctx.fstar, ctx.c0, ctx.m);
    RecoveredFields rr = recover_all(states[c + 1], mr, ctx.current, ctx.tol);

    // vertical grid speed for the reference-frame correction
    EllipticEngine vert(maps.minus, BcType::dirichlet, BcType::dirichlet);
    BulkField dtx3 = vert.solve(BulkField(Side::plasma, maps.minus.n, ctx.m),
                                states[c].theta, InterfaceField(maps.minus.n), ctx.tol, 500)
                         .field;

    std::array<BulkVector, 3> gu, gh;
    for (int i = 0; i < 3; ++i) {
        gu[i] = ops::gradient(rec.u[i], maps.minus);
        gh[i] = ops::gradient(rec.h[i], maps.minus);
    }
    BulkVector gp = ops::gradient(rec.p, maps.minus);

    BulkVector w(Side::plasma, maps.minus.n, ctx.m), b(Side::plasma, maps.minus.n, ctx.m);
    const double inv2dt = 0.5 / dt;
    for (int i = 0; i < 3; ++i) {
        BulkField dtu = inv2dt * (rr.u[i] - rl.u[i]) - ops::multiply(dtx3, gu[i][2]);
        BulkField dth = inv2dt * (rr.h[i] - rl.h[i]) - ops::multiply(dtx3, gh[i][2]);
        w[i] = dtu + advect(rec.u, gu[i]) - advect(rec.h, gh[i]) + gp[i];
        b[i] = dth + advect(rec.u, gh[i]) - advect(rec.h, gu[i]);
    }

    LimitResiduals out;
    out.w_norm = ops::bulk_max(w);
    out.b_norm = ops::bulk_max(b);
    out.w_normal = spectral::max_abs(ops::normal_component(w, maps.minus));
    out.b_normal = spectral::max_abs(ops::normal_component(b, maps.minus));
    out.w3_wall = spectral::max_abs(ops::wall_trace(w[2]));
    out.b3_wall = spectral::max_abs(ops::wall_trace(b[2]));
    out.w_wall_mean = std::max(std::abs(ops::wall_mean_integral(w[0])),
                               std::abs(ops::wall_mean_integral(w[1])));
    out.b_wall_mean = std::max(std::abs(ops::wall_mean_integral(b[0])),
                               std::abs(ops::wall_mean_integral(b[1])));
    return out;
}

DiagnosticsRecord make_record(const PlasmaVacuumState& state, const RecoveredFields& rec,
                              const MapPair& maps, double s, double f_mean0,
                              const InterfaceField& fstar) {
    DiagnosticsRecord r;
    r.t = state.time;
    InterfaceField h1 = ops::trace_on_interface(rec.h[0]);
    InterfaceField h2 = ops::trace_on_interface(rec.h[1]);
    InterfaceField g1 = ops::trace_on_interface(rec.hhat[0]);
    InterfaceField g2 = ops::trace_on_interface(rec.hhat[1]);
    r.lambda_min = stability_lambda(h1, h2, g1, g2).second;

    CoefficientFreeze fr;
    fr.u1 = ops::trace_on_interface(rec.u[0]);
    fr.u2 = ops::trace_on_interface(rec.u[1]);
    fr.h1 = h1;
    fr.h2 = h2;
    fr.hh1 = g1;
    fr.hh2 = g2;
    InterfaceField fbar = state.f - fstar;
    r.e_s = energy_Es(fbar, state.theta, fr, s);
    r.cal_e_s = energy_calEs(fbar, state.theta, s);

    r.mean_f_drift = spectral::mean(state.f) - f_mean0;
    r.mean_theta = spectral::mean(state.theta);

    InterfaceResiduals ir = interface_residuals(state, rec, maps);
    r.hn_residual = ir.h_normal;
    r.hhatn_residual = ir.hhat_normal;
    r.pressure_balance_residual = ir.pressure_balance;
    r.kinematic_residual = ir.kinematic;

    auto [dw, dj] = divergence_persistence(state.omega_star, state.j_star, maps.minus);
    r.div_omega = dw;
    r.div_j = dj;
    return r;
}

} // namespace mhdsim

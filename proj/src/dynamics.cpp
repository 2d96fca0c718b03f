#include "mhdsim/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

constexpr double kArea = 4.0 * std::numbers::pi * std::numbers::pi;

double lambda_min_of(const InterfaceField& h1, const InterfaceField& h2,
                     const InterfaceField& g1, const InterfaceField& g2) {
    double lmin = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < h1.size(); ++k) {
        const double a = h1[k] * h1[k] + g1[k] * g1[k];
        const double b = h1[k] * h2[k] + g1[k] * g2[k];
        const double d = h2[k] * h2[k] + g2[k] * g2[k];
        const double tr = a + d;
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (a * d - b * b)));
        lmin = std::min(lmin, 0.5 * (tr - disc));
    }
    return lmin;
}

// a . grad(b) from precomputed gradient components
BulkField advect(const BulkVector& a, const BulkVector& grad_b) {
    BulkField out = ops::multiply(a[0], grad_b[0]);
    out += ops::multiply(a[1], grad_b[1]);
    out += ops::multiply(a[2], grad_b[2]);
    return out;
}

InterfaceField second_derivative_form(const InterfaceField& f, const InterfaceField& a11,
                                      const InterfaceField& a12, const InterfaceField& a22) {
    // a11 d11 f + 2 a12 d12 f + a22 d22 f, products dealiased
    InterfaceField d11 = spectral::fourier_derivative(f, 1, 2);
    InterfaceField d22 = spectral::fourier_derivative(f, 2, 2);
    InterfaceField d12 =
        spectral::fourier_derivative(spectral::fourier_derivative(f, 1, 1), 2, 1);
    return spectral::multiply(a11, d11) + 2.0 * spectral::multiply(a12, d12) +
           spectral::multiply(a22, d22);
}

} // namespace

double CoefficientFreeze::lambda_min() const { return lambda_min_of(h1, h2, hh1, hh2); }

CoefficientFreeze freeze_coefficients(const RecoveredFields& rec, const MapPair& maps,
                                      double tol) {
    CoefficientFreeze fr;
    fr.u1 = ops::trace_on_interface(rec.u[0]);
    fr.u2 = ops::trace_on_interface(rec.u[1]);
    fr.h1 = ops::trace_on_interface(rec.h[0]);
    fr.h2 = ops::trace_on_interface(rec.h[1]);
    fr.hh1 = ops::trace_on_interface(rec.hhat[0]);
    fr.hh2 = ops::trace_on_interface(rec.hhat[1]);
    fr.g = g_source(rec, maps, tol);
    return fr;
}

InterfaceField g_source(const RecoveredFields& rec, const MapPair& maps, double tol) {
    const int n = maps.minus.n;
    // plasma pressure sources, reused from the recovery when cached
    BulkField puu = rec.p_uu.size() > 0 ? rec.p_uu
                                        : solve_pressure_pair(rec.u, rec.u, maps.minus, tol);
    BulkField phh = rec.p_hh.size() > 0 ? rec.p_hh
                                        : solve_pressure_pair(rec.h, rec.h, maps.minus, tol);
    InterfaceField out = (-1.0) * ops::conormal_interface(puu - phh, maps.minus);

    // vacuum field energy |hhat|^2 and its hat-harmonic extension
    BulkField s(Side::vacuum, n, maps.plus.m);
    for (int c = 0; c < 3; ++c)
        s += ops::multiply(rec.hhat[c], rec.hhat[c]);
    BulkField shat = harmonic_extension_hat(s, maps.plus, tol);
    out -= 0.5 * ops::conormal_interface(s - shat, maps.plus);
    out += 0.5 * dn_bar(s, maps.plus, maps.minus, tol);
    out.check_finite("g source");
    return out;
}

InterfaceField theta_rhs(const PlasmaVacuumState& state, const RecoveredFields& rec,
                         const MapPair& maps, double c1, double tol) {
    CoefficientFreeze fr = freeze_coefficients(rec, maps, tol);
    if (c1 > 0.0 && fr.lambda_min() < c1)
        throw StabilityError("non-collinearity monitor tripped");
    InterfaceField out =
        (-2.0) * (spectral::multiply(fr.u1, spectral::fourier_derivative(state.theta, 1, 1)) +
                  spectral::multiply(fr.u2, spectral::fourier_derivative(state.theta, 2, 1)));
    // -(u_i u_j - h_i h_j - hhat_i hhat_j) d_i d_j f
    InterfaceField a11 = spectral::multiply(fr.h1, fr.h1) + spectral::multiply(fr.hh1, fr.hh1) -
                         spectral::multiply(fr.u1, fr.u1);
    InterfaceField a12 = spectral::multiply(fr.h1, fr.h2) + spectral::multiply(fr.hh1, fr.hh2) -
                         spectral::multiply(fr.u1, fr.u2);
    InterfaceField a22 = spectral::multiply(fr.h2, fr.h2) + spectral::multiply(fr.hh2, fr.hh2) -
                         spectral::multiply(fr.u2, fr.u2);
    out += second_derivative_form(state.f, a11, a12, a22);
    out += fr.g;
    return out;
}

std::pair<BulkVector, BulkVector> vorticity_rhs(const BulkVector& omega, const BulkVector& j,
                                                const BulkVector& u, const BulkVector& h,
                                                const CoordinateMap& map) {
    std::array<BulkVector, 3> gw, gj, gu, gh;
    for (int c = 0; c < 3; ++c) {
        gw[c] = ops::gradient(omega[c], map);
        gj[c] = ops::gradient(j[c], map);
        gu[c] = ops::gradient(u[c], map);
        gh[c] = ops::gradient(h[c], map);
    }
    BulkVector dw(map.side, map.n, map.m), dj(map.side, map.n, map.m);
    for (int c = 0; c < 3; ++c) {
        dw[c] = advect(h, gj[c]) - advect(u, gw[c]);
        dw[c] += advect(omega, gu[c]) - advect(j, gh[c]);
        dj[c] = advect(h, gw[c]) - advect(u, gj[c]);
        dj[c] += advect(j, gu[c]) - advect(omega, gh[c]);
    }
    // -2 grad(u_i) x grad(h_i)
    for (int i = 0; i < 3; ++i) {
        dj[0] -= 2.0 * (ops::multiply(gu[i][1], gh[i][2]) - ops::multiply(gu[i][2], gh[i][1]));
        dj[1] -= 2.0 * (ops::multiply(gu[i][2], gh[i][0]) - ops::multiply(gu[i][0], gh[i][2]));
        dj[2] -= 2.0 * (ops::multiply(gu[i][0], gh[i][1]) - ops::multiply(gu[i][1], gh[i][0]));
    }
    return {dw, dj};
}

std::array<double, 4> beta_gamma_rhs(const BulkVector& u, const BulkVector& h) {
    std::array<InterfaceField, 2> tu{ops::wall_trace(u[0]), ops::wall_trace(u[1])};
    std::array<InterfaceField, 2> th{ops::wall_trace(h[0]), ops::wall_trace(h[1])};
    std::array<double, 4> out{};
    for (int i = 0; i < 2; ++i) {
        InterfaceField bu(tu[i].grid_size()), bh(tu[i].grid_size());
        for (int d = 0; d < 2; ++d) {
            InterfaceField dui = spectral::fourier_derivative(tu[i], d + 1, 1);
            InterfaceField dhi = spectral::fourier_derivative(th[i], d + 1, 1);
            bu += spectral::multiply(tu[d], dui) - spectral::multiply(th[d], dhi);
            bh += spectral::multiply(tu[d], dhi) - spectral::multiply(th[d], dui);
        }
        out[i] = -kArea * spectral::mean(bu);
        out[2 + i] = -kArea * spectral::mean(bh);
    }
    return out;
}

std::pair<InterfaceField, InterfaceField> linearized_rhs(const InterfaceField& fbar,
                                                         const InterfaceField& thetabar,
                                                         const CoefficientFreeze& fr,
                                                         double c1) {
    if (c1 > 0.0 && fr.lambda_min() < c1)
        throw StabilityError("frozen coefficients are not hyperbolic");
    InterfaceField dtheta =
        (-2.0) * (spectral::multiply(fr.u1, spectral::fourier_derivative(thetabar, 1, 1)) +
                  spectral::multiply(fr.u2, spectral::fourier_derivative(thetabar, 2, 1)));
    InterfaceField a11 = spectral::multiply(fr.h1, fr.h1) + spectral::multiply(fr.hh1, fr.hh1) -
                         spectral::multiply(fr.u1, fr.u1);
    InterfaceField a12 = spectral::multiply(fr.h1, fr.h2) + spectral::multiply(fr.hh1, fr.hh2) -
                         spectral::multiply(fr.u1, fr.u2);
    InterfaceField a22 = spectral::multiply(fr.h2, fr.h2) + spectral::multiply(fr.hh2, fr.hh2) -
                         spectral::multiply(fr.u2, fr.u2);
    dtheta += second_derivative_form(fbar, a11, a12, a22);
    dtheta += fr.g;
    return {thetabar, dtheta};
}

StateDerivative evaluate_rhs(const PlasmaVacuumState& state, const DynamicsContext& ctx,
                             const RecoveredFields* rec0, const MapPair* maps0) {
    MapPair maps_local;
    RecoveredFields rec_local;
    if (!(rec0 && maps0)) {
        maps_local = build_maps(state.f, ctx.fstar, ctx.c0, ctx.m);
        rec_local = recover_all(state, maps_local, ctx.current, ctx.tol);
    }
    const MapPair& maps = maps0 && rec0 ? *maps0 : maps_local;
    const RecoveredFields& rec = rec0 && maps0 ? *rec0 : rec_local;

    StateDerivative d;
    d.df = spectral::mean_project(state.theta);
    d.dtheta = spectral::mean_project(
        theta_rhs(state, rec, maps, ctx.monitor ? ctx.c1 : -1.0, ctx.tol));

    auto [dw, dj] = vorticity_rhs(state.omega_star, state.j_star, rec.u, rec.h, maps.minus);
    // reference-frame correction: the grid moves vertically with the map,
    // d/dt (q o X) picks up dt(X3) d3(q)
    EllipticEngine vert(maps.minus, BcType::dirichlet, BcType::dirichlet);
    BulkField dtx3 = vert.solve(BulkField(Side::plasma, maps.minus.n, ctx.m), state.theta,
                                InterfaceField(maps.minus.n), ctx.tol, 500)
                         .field;
    for (int c = 0; c < 3; ++c) {
        dw[c] += ops::multiply(dtx3, ops::gradient(state.omega_star[c], maps.minus)[2]);
        dj[c] += ops::multiply(dtx3, ops::gradient(state.j_star[c], maps.minus)[2]);
    }
    d.domega = dw;
    d.dj = dj;

    auto bg = beta_gamma_rhs(rec.u, rec.h);
    d.dbeta = {bg[0], bg[1]};
    d.dgamma = {bg[2], bg[3]};
    return d;
}

namespace {

PlasmaVacuumState apply_derivative(const PlasmaVacuumState& base, const StateDerivative& d,
                                   double c) {
    PlasmaVacuumState s = base;
    s.f += c * d.df;
    s.theta += c * d.dtheta;
    s.omega_star += c * d.domega;
    s.j_star += c * d.dj;
    for (int i = 0; i < 2; ++i) {
        s.beta[i] += c * d.dbeta[i];
        s.gamma[i] += c * d.dgamma[i];
    }
    s.time = base.time + c;
    return s;
}

} // namespace

PlasmaVacuumState rk4_step(const PlasmaVacuumState& state, double dt,
                           const DynamicsContext& ctx, const RecoveredFields* rec0,
                           const MapPair* maps0) {
    if (dt <= 0.0)
        throw ValidationError("time step must be positive");
    const double f_mean = spectral::mean(state.f);

    StateDerivative k1 = evaluate_rhs(state, ctx, rec0, maps0);
    StateDerivative k2 = evaluate_rhs(apply_derivative(state, k1, 0.5 * dt), ctx);
    StateDerivative k3 = evaluate_rhs(apply_derivative(state, k2, 0.5 * dt), ctx);
    StateDerivative k4 = evaluate_rhs(apply_derivative(state, k3, dt), ctx);

    PlasmaVacuumState out = state;
    const double w = dt / 6.0;
    for (const auto& [k, c] : {std::pair<const StateDerivative*, double>{&k1, w},
                               {&k2, 2.0 * w},
                               {&k3, 2.0 * w},
                               {&k4, w}}) {
        out.f += c * k->df;
        out.theta += c * k->dtheta;
        out.omega_star += c * k->domega;
        out.j_star += c * k->dj;
        for (int i = 0; i < 2; ++i) {
            out.beta[i] += c * k->dbeta[i];
            out.gamma[i] += c * k->dgamma[i];
        }
    }
    out.f = spectral::dealias(spectral::mean_project(out.f)) + InterfaceField(out.f.grid_size(), f_mean);
    out.theta = spectral::dealias(spectral::mean_project(out.theta));
    for (int c = 0; c < 3; ++c) {
        out.omega_star[c] = ops::dealias(out.omega_star[c]);
        out.j_star[c] = ops::dealias(out.j_star[c]);
    }
    out.time = state.time + dt;
    return out;
}

double cfl_dt(const RecoveredFields& rec, const TimeStepConfig& cfg, int n) {
    InterfaceField u1 = ops::trace_on_interface(rec.u[0]);
    InterfaceField u2 = ops::trace_on_interface(rec.u[1]);
    InterfaceField h1 = ops::trace_on_interface(rec.h[0]);
    InterfaceField h2 = ops::trace_on_interface(rec.h[1]);
    InterfaceField g1 = ops::trace_on_interface(rec.hhat[0]);
    InterfaceField g2 = ops::trace_on_interface(rec.hhat[1]);
    double cmax = 0.0;
    for (size_t k = 0; k < u1.size(); ++k) {
        const double a = h1[k] * h1[k] + g1[k] * g1[k];
        const double b = h1[k] * h2[k] + g1[k] * g2[k];
        const double d = h2[k] * h2[k] + g2[k] * g2[k];
        const double tr = a + d;
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (a * d - b * b)));
        const double lmax = 0.5 * (tr + disc);
        const double speed = 2.0 * std::hypot(u1[k], u2[k]) + std::sqrt(lmax);
        cmax = std::max(cmax, speed);
    }
    double bulk = 0.0;
    for (size_t k = 0; k < rec.u[0].size(); ++k) {
        const double uu = std::sqrt(rec.u[0][k] * rec.u[0][k] + rec.u[1][k] * rec.u[1][k] +
                                    rec.u[2][k] * rec.u[2][k]);
        const double hh = std::sqrt(rec.h[0][k] * rec.h[0][k] + rec.h[1][k] * rec.h[1][k] +
                                    rec.h[2][k] * rec.h[2][k]);
        bulk = std::max(bulk, uu + hh);
    }
    cmax += bulk;
    if (cmax <= 0.0)
        return cfg.dt_max;
    const double dx = 2.0 * std::numbers::pi / n;
    return std::min(cfg.cfl * dx / cmax, cfg.dt_max);
}

} // namespace mhdsim

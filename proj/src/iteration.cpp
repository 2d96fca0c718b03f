#include "mhdsim/iteration.hpp"

#include <cmath>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

CoefficientFreeze lerp(const CoefficientFreeze& a, const CoefficientFreeze& b, double t) {
    CoefficientFreeze out;
    out.u1 = (1.0 - t) * a.u1 + t * b.u1;
    out.u2 = (1.0 - t) * a.u2 + t * b.u2;
    out.h1 = (1.0 - t) * a.h1 + t * b.h1;
    out.h2 = (1.0 - t) * a.h2 + t * b.h2;
    out.hh1 = (1.0 - t) * a.hh1 + t * b.hh1;
    out.hh2 = (1.0 - t) * a.hh2 + t * b.hh2;
    out.g = (1.0 - t) * a.g + t * b.g;
    return out;
}

BulkVector lerp(const BulkVector& a, const BulkVector& b, double t) {
    BulkVector out = a;
    out *= 1.0 - t;
    out += t * b;
    return out;
}

BulkField lerp(const BulkField& a, const BulkField& b, double t) {
    BulkField out = a;
    out *= 1.0 - t;
    out += t * b;
    return out;
}

// background data prepared per time sample
struct SampleData {
    MapPair maps;
    RecoveredFields rec;
    CoefficientFreeze fr;
    BulkField dtx3;
};

SampleData analyze(const PlasmaVacuumState& s, const DynamicsContext& ctx) {
    SampleData d{build_maps(s.f, ctx.fstar, ctx.c0, ctx.m), {}, {}, {}};
    d.rec = recover_all(s, d.maps, ctx.current, ctx.tol);
    d.fr = freeze_coefficients(d.rec, d.maps, ctx.tol);
    EllipticEngine vert(d.maps.minus, BcType::dirichlet, BcType::dirichlet);
    d.dtx3 = vert.solve(BulkField(Side::plasma, d.maps.minus.n, ctx.m), s.theta,
                        InterfaceField(d.maps.minus.n), ctx.tol, 500)
                 .field;
    return d;
}

std::pair<BulkVector, BulkVector> transport_rhs(const BulkVector& omega, const BulkVector& j,
                                                const BulkVector& u, const BulkVector& h,
                                                const CoordinateMap& map,
                                                const BulkField& dtx3) {
    auto [dw, dj] = vorticity_rhs(omega, j, u, h, map);
    for (int c = 0; c < 3; ++c) {
        dw[c] += ops::multiply(dtx3, ops::gradient(omega[c], map)[2]);
        dj[c] += ops::multiply(dtx3, ops::gradient(j[c], map)[2]);
    }
    return {dw, dj};
}

} // namespace

double bulk_hs_proxy(const BulkField& v, double sigma) {
    const ChebGrid& g = strip_grid(v.side(), v.levels());
    BulkField dv = ops::dz3(v);
    double a = 0.0, b = 0.0;
    for (int l = 0; l <= v.levels(); ++l) {
        const double n0 = spectral::hs_norm(v.level(l), sigma);
        const double n1 = spectral::hs_norm(dv.level(l), std::max(sigma - 1.0, 0.0));
        a += g.weights[l] * n0 * n0;
        b += g.weights[l] * n1 * n1;
    }
    return std::sqrt(a + b);
}

MembershipReport membership_check(const TrajectoryCandidate& c, const IterationConfig& cfg) {
    MembershipReport rep;
    const double shalf = cfg.s - 0.5;
    for (size_t k = 0; k < c.states.size(); ++k) {
        const PlasmaVacuumState& s = c.states[k];
        const InterfaceField ref =
            cfg.fstar.grid_size() > 0 ? cfg.fstar : InterfaceField(s.f.grid_size());
        rep.max_mean_theta = std::max(rep.max_mean_theta, std::abs(spectral::mean(s.theta)));
        rep.max_drift = std::max(rep.max_drift, spectral::hs_norm(s.f - ref, shalf));
        double m1 = spectral::hs_norm(s.f, cfg.s + 0.5) + spectral::hs_norm(s.theta, shalf);
        for (int comp = 0; comp < 3; ++comp)
            m1 += bulk_hs_proxy(s.omega_star[comp], cfg.s - 1.0) +
                  bulk_hs_proxy(s.j_star[comp], cfg.s - 1.0);
        m1 += std::abs(s.beta[0]) + std::abs(s.beta[1]) + std::abs(s.gamma[0]) +
              std::abs(s.gamma[1]);
        rep.measured_m1 = std::max(rep.measured_m1, m1);
        if (k + 1 < c.states.size() && c.dt > 0.0) {
            InterfaceField dth = (1.0 / c.dt) * (c.states[k + 1].theta - s.theta);
            rep.measured_m2 = std::max(rep.measured_m2, spectral::hs_norm(dth, cfg.s - 1.5));
        }
    }
    rep.mean_theta_ok = rep.max_mean_theta <= 1e-8;
    rep.drift_ok = rep.max_drift <= cfg.delta0;
    rep.ceiling_ok = (cfg.M1 <= 0.0 || rep.measured_m1 <= cfg.M1) &&
                     (cfg.M2 <= 0.0 || rep.measured_m2 <= cfg.M2);
    return rep;
}

TrajectoryCandidate constant_candidate(const PlasmaVacuumState& init,
                                       const IterationConfig& cfg) {
    TrajectoryCandidate c;
    c.dt = cfg.T / cfg.samples;
    c.states.assign(cfg.samples + 1, init);
    for (int k = 0; k <= cfg.samples; ++k)
        c.states[k].time = init.time + k * c.dt;
    return c;
}

TrajectoryCandidate iterate_once(const TrajectoryCandidate& background,
                                 const IterationConfig& cfg, const DynamicsContext& ctx) {
    if (background.states.size() < 2)
        throw ValidationError("background trajectory needs at least two samples");
    MembershipReport mem = membership_check(background, cfg);
    if (!mem.pass())
        throw ValidationError("background trajectory leaves the iteration space");

    const int steps = static_cast<int>(background.states.size()) - 1;
    const double dt = background.dt;
    std::vector<SampleData> bg;
    bg.reserve(steps + 1);
    for (const auto& s : background.states)
        bg.push_back(analyze(s, ctx));

    const PlasmaVacuumState& s0 = background.states[0];
    const double f_mean0 = spectral::mean(s0.f);
    const int n = s0.f.grid_size();

    TrajectoryCandidate out;
    out.dt = dt;
    out.states.reserve(steps + 1);
    out.states.push_back(s0);

    InterfaceField f1 = s0.f, th = s0.theta;
    BulkVector w = s0.omega_star, j = s0.j_star;
    std::array<double, 2> beta = s0.beta, gamma = s0.gamma;
    std::array<double, 4> q_prev = beta_gamma_rhs(bg[0].rec.u, bg[0].rec.h);

    for (int k = 0; k < steps; ++k) {
        const SampleData& a = bg[k];
        const SampleData& b = bg[k + 1];
        CoefficientFreeze fr_mid = lerp(a.fr, b.fr, 0.5);

        // frozen-coefficient linear interface system, classical RK4
        auto [kf1, kt1] = linearized_rhs(f1, th, a.fr);
        auto [kf2, kt2] = linearized_rhs(f1 + 0.5 * dt * kf1, th + 0.5 * dt * kt1, fr_mid);
        auto [kf3, kt3] = linearized_rhs(f1 + 0.5 * dt * kf2, th + 0.5 * dt * kt2, fr_mid);
        auto [kf4, kt4] = linearized_rhs(f1 + dt * kf3, th + dt * kt3, b.fr);
        f1 += (dt / 6.0) * (kf1 + 2.0 * kf2 + 2.0 * kf3 + kf4);
        th += (dt / 6.0) * (kt1 + 2.0 * kt2 + 2.0 * kt3 + kt4);
        f1 = spectral::dealias(f1);
        th = spectral::dealias(th);

        // linear transport of vorticity and current along the background flow;
        // the geometry is held at the left sample over the step
        BulkVector u_mid = lerp(a.rec.u, b.rec.u, 0.5);
        BulkVector h_mid = lerp(a.rec.h, b.rec.h, 0.5);
        BulkField x_mid = lerp(a.dtx3, b.dtx3, 0.5);
        auto [w1, j1] = transport_rhs(w, j, a.rec.u, a.rec.h, a.maps.minus, a.dtx3);
        auto [w2, j2] = transport_rhs(w + 0.5 * dt * w1, j + 0.5 * dt * j1, u_mid, h_mid,
                                      a.maps.minus, x_mid);
        auto [w3, j3] = transport_rhs(w + 0.5 * dt * w2, j + 0.5 * dt * j2, u_mid, h_mid,
                                      a.maps.minus, x_mid);
        auto [w4, j4] = transport_rhs(w + dt * w3, j + dt * j3, b.rec.u, b.rec.h,
                                      a.maps.minus, b.dtx3);
        w += (dt / 6.0) * (w1 + 2.0 * w2 + 2.0 * w3 + w4);
        j += (dt / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
        for (int c = 0; c < 3; ++c) {
            w[c] = ops::dealias(w[c]);
            j[c] = ops::dealias(j[c]);
        }

        // wall mean quadratures of the background (trapezoid)
        std::array<double, 4> q_next = beta_gamma_rhs(b.rec.u, b.rec.h);
        for (int i = 0; i < 2; ++i) {
            beta[i] += 0.5 * dt * (q_prev[i] + q_next[i]);
            gamma[i] += 0.5 * dt * (q_prev[2 + i] + q_next[2 + i]);
        }
        q_prev = q_next;

        PlasmaVacuumState s = background.states[k + 1];
        s.f = spectral::mean_project(f1) + InterfaceField(n, f_mean0);
        s.theta = spectral::mean_project(th);
        s.omega_star = w;
        s.j_star = j;
        s.beta = beta;
        s.gamma = gamma;
        s.time = s0.time + (k + 1) * dt;
        out.states.push_back(std::move(s));
    }
    return out;
}

double iterate_distance(const TrajectoryCandidate& a, const TrajectoryCandidate& b, int s) {
    if (a.states.size() != b.states.size())
        throw GridMismatch("trajectories sampled on different time grids");
    double sup = 0.0;
    for (size_t k = 0; k < a.states.size(); ++k) {
        const PlasmaVacuumState& x = a.states[k];
        const PlasmaVacuumState& y = b.states[k];
        double d = spectral::hs_norm(x.f - y.f, s - 0.5) +
                   spectral::hs_norm(x.theta - y.theta, s - 1.5);
        for (int c = 0; c < 3; ++c) {
            d += bulk_hs_proxy(x.omega_star[c] - y.omega_star[c], s - 2.0);
            d += bulk_hs_proxy(x.j_star[c] - y.j_star[c], s - 2.0);
        }
        d += std::abs(x.beta[0] - y.beta[0]) + std::abs(x.beta[1] - y.beta[1]);
        d += std::abs(x.gamma[0] - y.gamma[0]) + std::abs(x.gamma[1] - y.gamma[1]);
        sup = std::max(sup, d);
    }
    return sup;
}

std::pair<TrajectoryCandidate, ContractionReport>
picard_solve(const PlasmaVacuumState& init, const IterationConfig& cfg,
             const DynamicsContext& ctx) {
    ContractionReport rep;
    rep.T = cfg.T;
    TrajectoryCandidate cur = constant_candidate(init, cfg);
    int bad = 0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        TrajectoryCandidate next = iterate_once(cur, cfg, ctx);
        const double d = iterate_distance(next, cur, cfg.s);
        rep.distances.push_back(d);
        // the fixed-point argument needs the map to stay inside the working
        // set; an escaping or non-finite iterate means the horizon is too long
        if (!std::isfinite(d) || !membership_check(next, cfg).pass())
            throw NoContraction("iterate left the working set; shrink the horizon");
        if (rep.distances.size() > 1) {
            const double prev = rep.distances[rep.distances.size() - 2];
            const double r = prev > 0.0 ? d / prev : 0.0;
            rep.ratios.push_back(r);
            bad = r > 1.0 ? bad + 1 : 0;
            if (bad >= 3)
                throw NoContraction("iteration map is not contracting; shrink the horizon");
        }
        cur = std::move(next);
        rep.iterations = iter + 1;
        if (d <= cfg.contraction_tol) {
            rep.converged = true;
            break;
        }
    }
    return {std::move(cur), rep};
}

} // namespace mhdsim

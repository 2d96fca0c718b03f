#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mhdsim/dynamics.hpp"
#include "mhdsim/errors.hpp"

using namespace mhdsim;
using testutil::max_diff;

namespace {
const int N = 32, M = 16;
const double kArea = 4.0 * M_PI * M_PI;

SurfaceCurrent unit_current(int n = N) {
    return SurfaceCurrent::constant(InterfaceField(n, 1.0), InterfaceField(n));
}

PlasmaVacuumState perturbed_state(const InterfaceField& f) {
    PlasmaVacuumState s;
    s.f = f;
    s.theta = InterfaceField(N);
    s.omega_star = BulkVector(Side::plasma, N, M);
    s.j_star = BulkVector(Side::plasma, N, M);
    s.gamma = {kArea, 0.0};
    return s;
}

BulkField sample_ref(Side side, int m,
                     const std::function<double(double, double, double)>& fn) {
    const ChebGrid& g = strip_grid(side, m);
    BulkField out(side, N, m);
    const double h = 2.0 * M_PI / N;
    for (int l = 0; l <= m; ++l)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i)
                out.at(i, j, l) = fn(i * h, j * h, g.nodes[l]);
    return out;
}
} // namespace

TEST_CASE("source term vanishes at equilibrium") {
    PlasmaVacuumState s = perturbed_state(InterfaceField(N));
    MapPair maps = build_maps(s.f, s.f, 0.05, M);
    RecoveredFields rec = recover_all(s, maps, unit_current());
    CHECK(spectral::max_abs(g_source(rec, maps)) < 1e-9);
    CHECK(spectral::max_abs(theta_rhs(s, rec, maps)) < 1e-9);

    // zero plasma fields with a constant vacuum field
    RecoveredFields zero;
    zero.u = BulkVector(Side::plasma, N, M);
    zero.h = BulkVector(Side::plasma, N, M);
    zero.hhat = BulkVector(Side::vacuum, N, M);
    zero.hhat[1] = BulkField(Side::vacuum, N, M, 1.0);
    CHECK(spectral::max_abs(g_source(zero, maps)) < 1e-10);
}

TEST_CASE("interface acceleration matches the dispersion symbol") {
    const double eps = 1e-4;
    SurfaceCurrent cur = unit_current();

    // k = (1,0): symbol (h.k)^2 = 1, vacuum response invisible
    InterfaceField f1 = InterfaceField::sample(N, [&](double x1, double) {
        return eps * std::cos(x1);
    });
    PlasmaVacuumState s1 = perturbed_state(f1);
    MapPair m1 = build_maps(f1, InterfaceField(N), 0.05, M);
    RecoveredFields r1 = recover_all(s1, m1, cur);
    InterfaceField e1 = InterfaceField::sample(N, [&](double x1, double) {
        return -eps * std::cos(x1);
    });
    CHECK(max_diff(theta_rhs(s1, r1, m1), e1) < 3e-7);

    // k = (1,1): symbol 1 + tanh(sqrt(2))^2 through the vacuum response
    InterfaceField f2 = InterfaceField::sample(N, [&](double x1, double x2) {
        return eps * std::cos(x1 + x2);
    });
    PlasmaVacuumState s2 = perturbed_state(f2);
    MapPair m2 = build_maps(f2, InterfaceField(N), 0.05, M);
    RecoveredFields r2 = recover_all(s2, m2, cur);
    const double coef = 1.0 + std::pow(std::tanh(std::sqrt(2.0)), 2);
    InterfaceField e2 = InterfaceField::sample(N, [&](double x1, double x2) {
        return -eps * coef * std::cos(x1 + x2);
    });
    CHECK(max_diff(theta_rhs(s2, r2, m2), e2) < 3e-7);
}

TEST_CASE("linearized right-hand side oracles") {
    CoefficientFreeze zero;
    zero.u1 = zero.u2 = zero.h1 = zero.h2 = zero.hh1 = zero.hh2 = InterfaceField(N);
    zero.g = InterfaceField(N);
    InterfaceField fbar = InterfaceField::sample(N, [](double x1, double) {
        return std::cos(x1);
    });
    InterfaceField thetabar = InterfaceField::sample(N, [](double x1, double) {
        return std::sin(2.0 * x1);
    });
    auto [df0, dt0] = linearized_rhs(fbar, thetabar, zero);
    CHECK(max_diff(df0, thetabar) == 0.0);
    CHECK(spectral::max_abs(dt0) < 1e-12);

    CoefficientFreeze eq = zero;
    eq.h1 = InterfaceField(N, 1.0);
    eq.hh2 = InterfaceField(N, 1.0);
    auto [df1, dt1] = linearized_rhs(fbar, InterfaceField(N), eq);
    CHECK(max_diff(dt1, (-1.0) * fbar) < 1e-11);

    CoefficientFreeze src = zero;
    src.g = InterfaceField(N, 0.7);
    auto [df2, dt2] = linearized_rhs(InterfaceField(N), thetabar, src);
    CHECK(max_diff(dt2, InterfaceField(N, 0.7)) < 1e-13);

    // advection of theta by a frozen tangential velocity
    CoefficientFreeze adv = zero;
    adv.u1 = InterfaceField(N, 1.0);
    const double eps = 0.1;
    InterfaceField th = InterfaceField::sample(N, [&](double x1, double) {
        return eps * std::sin(x1);
    });
    auto [df3, dt3] = linearized_rhs(InterfaceField(N), th, adv);
    InterfaceField expect = InterfaceField::sample(N, [&](double x1, double) {
        return -2.0 * eps * std::cos(x1);
    });
    CHECK(max_diff(dt3, expect) < 1e-12);

    // hyperbolicity monitor
    CHECK_THROWS_AS(linearized_rhs(fbar, thetabar, zero, 0.01), StabilityError);
    CHECK(eq.lambda_min() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vorticity transport oracles") {
    MapPair maps = build_maps(InterfaceField(N), InterfaceField(N), 0.05, M);
    BulkVector cu(Side::plasma, N, M), ch(Side::plasma, N, M);
    cu[0] = BulkField(Side::plasma, N, M, 1.0);
    ch[1] = BulkField(Side::plasma, N, M, 2.0);
    auto [dw0, dj0] = vorticity_rhs(BulkVector(Side::plasma, N, M),
                                    BulkVector(Side::plasma, N, M), cu, ch, maps.minus);
    CHECK(ops::bulk_max(dw0) < 1e-12);
    CHECK(ops::bulk_max(dj0) < 1e-12);

    // u = (0,0,cos(x1)(z+1)), h = (1,0,0), omega = curl u, j = 0
    BulkVector u(Side::plasma, N, M), h(Side::plasma, N, M);
    u[2] = sample_ref(Side::plasma, M, [](double x1, double, double z) {
        return std::cos(x1) * (z + 1.0);
    });
    h[0] = BulkField(Side::plasma, N, M, 1.0);
    BulkVector w(Side::plasma, N, M);
    w[1] = sample_ref(Side::plasma, M, [](double x1, double, double z) {
        return std::sin(x1) * (z + 1.0);
    });
    auto [dw, dj] = vorticity_rhs(w, BulkVector(Side::plasma, N, M), u, h, maps.minus);
    BulkField ew = sample_ref(Side::plasma, M, [](double x1, double, double z) {
        return -0.5 * (z + 1.0) * std::sin(2.0 * x1);
    });
    BulkField ej = sample_ref(Side::plasma, M, [](double x1, double, double z) {
        return (z + 1.0) * std::cos(x1);
    });
    CHECK(ops::bulk_max(dw[0]) < 1e-11);
    CHECK(ops::bulk_max(dw[1] - ew) < 1e-10);
    CHECK(ops::bulk_max(dw[2]) < 1e-11);
    CHECK(ops::bulk_max(dj[1] - ej) < 1e-10);

    // the gradient cross term alone
    BulkVector u2(Side::plasma, N, M), h2(Side::plasma, N, M);
    u2[0] = sample_ref(Side::plasma, M, [](double, double, double z) { return z; });
    h2[0] = sample_ref(Side::plasma, M, [](double, double x2, double) {
        return std::cos(x2);
    });
    auto [dw2, dj2] = vorticity_rhs(BulkVector(Side::plasma, N, M),
                                    BulkVector(Side::plasma, N, M), u2, h2, maps.minus);
    BulkField ec = sample_ref(Side::plasma, M, [](double, double x2, double) {
        return -2.0 * std::sin(x2);
    });
    CHECK(ops::bulk_max(dw2) < 1e-11);
    CHECK(ops::bulk_max(dj2[0] - ec) < 1e-10);
    CHECK(ops::bulk_max(dj2[1]) < 1e-11);
    CHECK(ops::bulk_max(dj2[2]) < 1e-11);
}

TEST_CASE("wall mean quadratures") {
    BulkVector u(Side::plasma, N, M), h(Side::plasma, N, M);
    u[0] = BulkField(Side::plasma, N, M, 1.0);
    h[1] = BulkField(Side::plasma, N, M, 3.0);
    auto r0 = beta_gamma_rhs(u, h);
    for (double v : r0)
        CHECK(std::abs(v) < 1e-13);

    BulkVector us(Side::plasma, N, M);
    us[0] = sample_ref(Side::plasma, M, [](double, double x2, double) {
        return std::cos(x2);
    });
    us[1] = sample_ref(Side::plasma, M, [](double, double x2, double) {
        return std::sin(x2);
    });
    auto r = beta_gamma_rhs(us, BulkVector(Side::plasma, N, M));
    CHECK(r[0] == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-10));
    CHECK(std::abs(r[2]) < 1e-12);
    CHECK(std::abs(r[3]) < 1e-12);
}

TEST_CASE("equilibrium is a fixed point of the time step") {
    BulkVector u0(Side::plasma, N, M), h0(Side::plasma, N, M);
    h0[0] = BulkField(Side::plasma, N, M, 1.0);
    PlasmaVacuumState s = init_state(InterfaceField(N), u0, h0, unit_current(), InitParams{});
    DynamicsContext ctx;
    ctx.current = unit_current();
    ctx.fstar = InterfaceField(N);
    ctx.m = M;
    PlasmaVacuumState out = rk4_step(s, 0.05, ctx);
    CHECK(spectral::max_abs(out.f) < 1e-10);
    CHECK(spectral::max_abs(out.theta) < 1e-10);
    CHECK(ops::bulk_max(out.omega_star) < 1e-10);
    CHECK(ops::bulk_max(out.j_star) < 1e-10);
    CHECK(out.gamma[0] == doctest::Approx(kArea).epsilon(1e-12));
    CHECK_THROWS_AS(rk4_step(s, -0.1, ctx), ValidationError);
}

TEST_CASE("perturbed interface oscillates at the linear frequency") {
    const double eps = 1e-4;
    const int m = 12;
    InterfaceField f0 = InterfaceField::sample(N, [&](double x1, double) {
        return eps * std::cos(x1);
    });
    PlasmaVacuumState s;
    s.f = f0;
    s.theta = InterfaceField(N);
    s.omega_star = BulkVector(Side::plasma, N, m);
    s.j_star = BulkVector(Side::plasma, N, m);
    s.gamma = {kArea, 0.0};
    DynamicsContext ctx;
    ctx.current = unit_current();
    ctx.fstar = InterfaceField(N);
    ctx.m = m;

    // quarter period of the k = (1,0) oscillator (frequency 1)
    const int steps = 16;
    const double dt = 0.5 * M_PI / steps;
    for (int k = 0; k < steps; ++k)
        s = rk4_step(s, dt, ctx);
    InterfaceField expect = InterfaceField::sample(N, [&](double x1, double) {
        return -eps * std::cos(x1);
    });
    CHECK(spectral::max_abs(s.f) < 0.03 * eps);
    CHECK(max_diff(s.theta, expect) < 0.03 * eps);
    CHECK(std::abs(spectral::mean(s.f)) < 1e-12);
    CHECK(std::abs(spectral::mean(s.theta)) < 1e-12);
}

TEST_CASE("cfl step size at equilibrium") {
    PlasmaVacuumState s = perturbed_state(InterfaceField(N));
    MapPair maps = build_maps(s.f, s.f, 0.05, M);
    RecoveredFields rec = recover_all(s, maps, unit_current());
    TimeStepConfig cfg;
    const double expect = 0.4 * (2.0 * M_PI / N) / 2.0;
    CHECK(cfl_dt(rec, cfg, N) == doctest::Approx(expect).epsilon(1e-10));

    RecoveredFields zero;
    zero.u = BulkVector(Side::plasma, N, M);
    zero.h = BulkVector(Side::plasma, N, M);
    zero.hhat = BulkVector(Side::vacuum, N, M);
    CHECK(cfl_dt(zero, cfg, N) == cfg.dt_max);
}

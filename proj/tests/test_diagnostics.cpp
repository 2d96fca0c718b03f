#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mhdsim/diagnostics.hpp"
#include "mhdsim/errors.hpp"

using namespace mhdsim;

namespace {
const int N = 32, M = 12;
const double kArea = 4.0 * M_PI * M_PI;

SurfaceCurrent unit_current(int n = N) {
    return SurfaceCurrent::constant(InterfaceField(n, 1.0), InterfaceField(n));
}

PlasmaVacuumState base_state(const InterfaceField& f) {
    PlasmaVacuumState s;
    s.f = f;
    s.theta = InterfaceField(N);
    s.omega_star = BulkVector(Side::plasma, N, M);
    s.j_star = BulkVector(Side::plasma, N, M);
    s.gamma = {kArea, 0.0};
    return s;
}

DynamicsContext flat_context() {
    DynamicsContext ctx;
    ctx.current = unit_current();
    ctx.fstar = InterfaceField(N);
    ctx.m = M;
    return ctx;
}
} // namespace

TEST_CASE("stability monitor oracles") {
    InterfaceField one(N, 1.0), zero(N);
    auto [lid, lid_min] = stability_lambda(one, zero, zero, one);
    CHECK(lid_min == 1.0);
    CHECK(spectral::max_abs(lid - one) == 0.0);

    auto [lcol, lcol_min] = stability_lambda(one, zero, InterfaceField(N, 2.0), zero);
    CHECK(lcol_min == doctest::Approx(0.0).epsilon(1e-14));

    auto [lmix, lmix_min] = stability_lambda(one, zero, one, one);
    CHECK(lmix_min == doctest::Approx(0.5 * (3.0 - std::sqrt(5.0))).epsilon(1e-13));

    // closed form vs brute force over 10^4 directions for random draws
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int draw = 0; draw < 5; ++draw) {
        const double h1 = coef(rng), h2 = coef(rng), g1 = coef(rng), g2 = coef(rng);
        auto [lf, lmin] = stability_lambda(InterfaceField(N, h1), InterfaceField(N, h2),
                                           InterfaceField(N, g1), InterfaceField(N, g2));
        double brute = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 10000; ++a) {
            const double phi = 2.0 * M_PI * a / 10000.0;
            const double p1 = std::cos(phi), p2 = std::sin(phi);
            const double v = std::pow(h1 * p1 + h2 * p2, 2) + std::pow(g1 * p1 + g2 * p2, 2);
            brute = std::min(brute, v);
        }
        CHECK(std::abs(lmin - brute) < 1e-6);
    }
}

TEST_CASE("interface energy oracles") {
    const double s = 3.0;
    CoefficientFreeze zero;
    zero.u1 = zero.u2 = zero.h1 = zero.h2 = zero.hh1 = zero.hh2 = InterfaceField(N);
    InterfaceField f0(N), cosx = InterfaceField::sample(N, [](double x1, double) {
        return std::cos(x1);
    });
    CHECK(energy_Es(f0, f0, zero, s) == 0.0);

    const double expect = std::pow(2.0, s - 0.5) * 2.0 * M_PI * M_PI;
    CHECK(energy_Es(f0, cosx, zero, s) == doctest::Approx(expect).epsilon(1e-12));

    CoefficientFreeze eq = zero;
    eq.h1 = InterfaceField(N, 1.0);
    eq.hh2 = InterfaceField(N, 1.0);
    CHECK(energy_Es(cosx, f0, eq, s) == doctest::Approx(0.5 * expect).epsilon(1e-12));

    CHECK(energy_calEs(cosx, f0, s) ==
          doctest::Approx(std::pow(2.0, s + 0.5) * 2.0 * M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("energy equivalence sandwich over random hyperbolic draws") {
    const double s = 3.0;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-2.0, 2.0), uc(-1.0, 1.0);
    for (int draw = 0; draw < 100; ++draw) {
        double h1, h2, g1, g2, lmin;
        do {
            h1 = coef(rng);
            h2 = coef(rng);
            g1 = coef(rng);
            g2 = coef(rng);
            lmin = stability_lambda(InterfaceField(1, h1), InterfaceField(1, h2),
                                    InterfaceField(1, g1), InterfaceField(1, g2))
                       .second;
        } while (lmin < 0.05);
        const double u1 = uc(rng), u2 = uc(rng);

        CoefficientFreeze fr;
        fr.u1 = InterfaceField(N, u1);
        fr.u2 = InterfaceField(N, u2);
        fr.h1 = InterfaceField(N, h1);
        fr.h2 = InterfaceField(N, h2);
        fr.hh1 = InterfaceField(N, g1);
        fr.hh2 = InterfaceField(N, g2);

        InterfaceField f = testutil::random_band_limited(N, 3, rng);
        InterfaceField th = testutil::random_band_limited(N, 3, rng);
        const double es = energy_Es(f, th, fr, s);
        const double ces = energy_calEs(f, th, s);
        const double usq = u1 * u1 + u2 * u2;
        const double hsq = h1 * h1 + h2 * h2, gsq = g1 * g1 + g2 * g2;

        const double upper = 1.1 * std::max(2.0, 2.0 * usq + 0.5 * (hsq + gsq));
        CHECK(es <= upper * ces);

        const double lower = 0.1 * lmin / (1.0 + usq);
        const double l2 = std::pow(spectral::hs_norm(f, 0.0), 2) +
                          std::pow(spectral::hs_norm(th, 0.0), 2);
        const double slack = 10.0 * std::max(2.0, 2.0 * usq + 0.5 * (hsq + gsq));
        CHECK(es + slack * l2 >= lower * ces);
    }
}

TEST_CASE("interface residuals at equilibrium and under perturbation") {
    DynamicsContext ctx = flat_context();
    PlasmaVacuumState eq = base_state(InterfaceField(N));
    MapPair maps = build_maps(eq.f, ctx.fstar, 0.05, M);
    RecoveredFields rec = recover_all(eq, maps, ctx.current);
    InterfaceResiduals r = interface_residuals(eq, rec, maps);
    CHECK(r.pressure_balance < 1e-9);
    CHECK(r.h_normal < 1e-10);
    CHECK(r.hhat_normal < 1e-10);
    CHECK(r.kinematic < 1e-10);

    PlasmaVacuumState pert = base_state(InterfaceField::sample(N, [](double x1, double) {
        return 0.05 * std::cos(x1);
    }));
    MapPair mp = build_maps(pert.f, ctx.fstar, 0.05, M);
    RecoveredFields rp = recover_all(pert, mp, ctx.current);
    InterfaceResiduals r2 = interface_residuals(pert, rp, mp);
    CHECK(r2.h_normal < 1e-7);
    CHECK(r2.hhat_normal < 1e-7);
    CHECK(r2.pressure_balance < 1e-7);
}

TEST_CASE("divergence persistence") {
    MapPair maps = build_maps(InterfaceField(N), InterfaceField(N), 0.05, M);
    BulkVector zero(Side::plasma, N, M);
    auto [d0, d1] = divergence_persistence(zero, zero, maps.minus);
    CHECK(d0 == 0.0);
    CHECK(d1 == 0.0);

    // a curl is divergence-free to spectral accuracy
    const ChebGrid& g = strip_grid(Side::plasma, M);
    BulkVector a(Side::plasma, N, M);
    const double h = 2.0 * M_PI / N;
    for (int l = 0; l <= M; ++l)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i)
                a[1].at(i, j, l) = std::cos(i * h) * std::pow(g.nodes[l] + 1.0, 2);
    BulkVector w = ops::curl(a, maps.minus);
    auto [dw, unused] = divergence_persistence(w, zero, maps.minus);
    CHECK(dw < 1e-9);
}

TEST_CASE("limit residuals vanish at equilibrium and flag non-solutions") {
    DynamicsContext ctx = flat_context();
    PlasmaVacuumState eq = base_state(InterfaceField(N));
    std::vector<PlasmaVacuumState> hist(3, eq);
    for (int k = 0; k < 3; ++k)
        hist[k].time = 0.01 * k;
    LimitResiduals r = limit_residuals(hist, ctx);
    CHECK(r.w_norm < 1e-9);
    CHECK(r.b_norm < 1e-9);
    CHECK(r.w_normal < 1e-9);
    CHECK(r.w3_wall < 1e-9);
    CHECK(r.w_wall_mean < 1e-9);
    CHECK(r.b_wall_mean < 1e-9);

    CHECK_THROWS_AS(limit_residuals({eq, eq}, ctx), InsufficientHistory);

    // a frozen (static) perturbed interface is not a solution
    PlasmaVacuumState pert = base_state(InterfaceField::sample(N, [](double x1, double) {
        return 0.1 * std::cos(x1);
    }));
    std::vector<PlasmaVacuumState> bad(3, pert);
    for (int k = 0; k < 3; ++k)
        bad[k].time = 0.01 * k;
    LimitResiduals rb = limit_residuals(bad, ctx);
    CHECK(rb.w_norm > 1e-4);
    CHECK(rb.w_norm < 10.0);
}

TEST_CASE("diagnostics record at equilibrium") {
    DynamicsContext ctx = flat_context();
    PlasmaVacuumState eq = base_state(InterfaceField(N));
    MapPair maps = build_maps(eq.f, ctx.fstar, 0.05, M);
    RecoveredFields rec = recover_all(eq, maps, ctx.current);
    DiagnosticsRecord r = make_record(eq, rec, maps, 3.0, 0.0, ctx.fstar);
    CHECK(r.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.e_s < 1e-18);
    CHECK(r.cal_e_s < 1e-18);
    CHECK(std::abs(r.mean_f_drift) < 1e-14);
    CHECK(std::abs(r.mean_theta) < 1e-14);
    CHECK(r.pressure_balance_residual < 1e-9);
    CHECK(r.div_omega == 0.0);
    CHECK(r.div_j == 0.0);
}

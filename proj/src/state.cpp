#include "mhdsim/state.hpp"

#include <cmath>
#include <numbers>

#include "mhdsim/errors.hpp"

namespace mhdsim {

SurfaceCurrent SurfaceCurrent::constant(const InterfaceField& j1, const InterfaceField& j2) {
    SurfaceCurrent c;
    c.at = [j1, j2](double) { return std::array<InterfaceField, 2>{j1, j2}; };
    const InterfaceField zero(j1.grid_size());
    c.dt = [zero](double) { return std::array<InterfaceField, 2>{zero, zero}; };
    return c;
}

void SurfaceCurrent::check_compatible(double tol) const {
    auto j = at(0.0);
    InterfaceField div = spectral::fourier_derivative(j[0], 1, 1) +
                         spectral::fourier_derivative(j[1], 2, 1);
    const double scale = std::max(1.0, spectral::max_abs(j[0]) + spectral::max_abs(j[1]));
    if (spectral::max_abs(div) > tol * scale)
        throw CompatibilityError("surface current is not divergence free");
}

void PlasmaVacuumState::validate(double tol) const {
    f.check_finite("state f");
    theta.check_finite("state theta");
    if (std::abs(spectral::mean(theta)) > tol)
        throw ValidationError("interface velocity has nonzero mean");
    if (spectral::max_abs(f) > 1.0 - c0)
        throw GapViolation("interface leaves the admissible gap");
    if (std::abs(spectral::mean(ops::trace_on_interface(omega_star[2]))) > tol)
        throw ValidationError("reference vorticity has nonzero interface flux");
    if (std::abs(spectral::mean(ops::trace_on_interface(j_star[2]))) > tol)
        throw ValidationError("reference current has nonzero interface flux");
}

MapPair build_maps(const InterfaceField& f, const InterfaceField& fstar, double c0, int m) {
    Interface fi = build_interface(f, c0);
    Interface fs = build_interface(fstar, c0);
    return MapPair{harmonic_coordinate_map(fi, fs, Side::plasma, m),
                   harmonic_coordinate_map(fi, fs, Side::vacuum, m)};
}

InterfaceField compute_theta(const BulkVector& u, const CoordinateMap& map_minus) {
    return ops::normal_component(u, map_minus);
}

InterfaceField stability_lambda(const BulkVector& h, const BulkVector& hhat) {
    InterfaceField h1 = ops::trace_on_interface(h[0]);
    InterfaceField h2 = ops::trace_on_interface(h[1]);
    InterfaceField g1 = ops::trace_on_interface(hhat[0]);
    InterfaceField g2 = ops::trace_on_interface(hhat[1]);
    const int n = h1.grid_size();
    InterfaceField out(n);
    for (size_t k = 0; k < out.size(); ++k) {
        const double a = h1[k] * h1[k] + g1[k] * g1[k];
        const double b = h1[k] * h2[k] + g1[k] * g2[k];
        const double d = h2[k] * h2[k] + g2[k] * g2[k];
        const double tr = a + d;
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (a * d - b * b)));
        out[k] = 0.5 * (tr - disc);
    }
    return out;
}

BulkVector recover_velocity(const PlasmaVacuumState& state, const MapPair& maps, double tol) {
    BulkVector omega = div_free_project(state.omega_star, maps.minus, tol);
    PlasmaDivCurlData data{BulkField(Side::plasma, maps.minus.n, maps.minus.m), omega,
                           state.theta, state.beta[0], state.beta[1]};
    return solve_plasma(data, maps.minus, tol);
}

BulkVector recover_magnetic(const PlasmaVacuumState& state, const MapPair& maps, double tol) {
    BulkVector j = div_free_project(state.j_star, maps.minus, tol);
    PlasmaDivCurlData data{BulkField(Side::plasma, maps.minus.n, maps.minus.m), j,
                           InterfaceField(maps.minus.n), state.gamma[0], state.gamma[1]};
    return solve_plasma(data, maps.minus, tol);
}

BulkVector solve_vacuum_field(const InterfaceField& j1, const InterfaceField& j2,
                              const CoordinateMap& map_plus, double tol) {
    VacuumDivCurlData data{BulkField(Side::vacuum, map_plus.n, map_plus.m),
                           BulkVector(Side::vacuum, map_plus.n, map_plus.m),
                           InterfaceField(map_plus.n), j1, j2};
    return solve_vacuum(data, map_plus, tol);
}

BulkVector solve_vacuum_field_dt(const InterfaceField& theta, const BulkVector& hhat,
                                 const InterfaceField& dj1, const InterfaceField& dj2,
                                 const CoordinateMap& map_plus, double tol) {
    // interface datum: dt(hhat) . N = -theta d3(hhat) . N + hhat1 d1(theta) + hhat2 d2(theta)
    InterfaceField t1 = ops::trace_on_interface(ops::gradient(hhat[0], map_plus)[2]);
    InterfaceField t2 = ops::trace_on_interface(ops::gradient(hhat[1], map_plus)[2]);
    InterfaceField t3 = ops::trace_on_interface(ops::gradient(hhat[2], map_plus)[2]);
    InterfaceField d3hN = t3 - spectral::multiply(map_plus.interface.d1f, t1) -
                          spectral::multiply(map_plus.interface.d2f, t2);
    InterfaceField datum =
        spectral::multiply(ops::trace_on_interface(hhat[0]),
                           spectral::fourier_derivative(theta, 1, 1)) +
        spectral::multiply(ops::trace_on_interface(hhat[1]),
                           spectral::fourier_derivative(theta, 2, 1)) -
        spectral::multiply(theta, d3hN);
    VacuumDivCurlData data{BulkField(Side::vacuum, map_plus.n, map_plus.m),
                           BulkVector(Side::vacuum, map_plus.n, map_plus.m), datum, dj1, dj2};
    return solve_vacuum(data, map_plus, tol);
}

BulkField assemble_pressure(const BulkVector& u, const BulkVector& h, const BulkVector& hhat,
                            const MapPair& maps, double tol) {
    InterfaceField tr(maps.plus.n);
    for (int c = 0; c < 3; ++c) {
        InterfaceField t = ops::trace_on_interface(hhat[c]);
        tr += spectral::multiply(t, t);
    }
    BulkField p = 0.5 * harmonic_extension(tr, maps.minus, tol);
    p += solve_pressure_pair(u, u, maps.minus, tol);
    p -= solve_pressure_pair(h, h, maps.minus, tol);
    return p;
}

PlasmaVacuumState init_state(const InterfaceField& f0, const BulkVector& u0,
                             const BulkVector& h0, const SurfaceCurrent& current,
                             const InitParams& params) {
    current.check_compatible();
    if (spectral::max_abs(f0) > 1.0 - 2.0 * params.c0)
        throw StabilityError("initial interface violates the gap condition");
    MapPair maps = build_maps(f0, f0, params.c0, params.m);

    const double scale =
        std::max(1.0, ops::bulk_max(u0) + ops::bulk_max(h0));
    if (ops::bulk_max(ops::divergence(u0, maps.minus)) > params.tol * scale)
        throw CompatibilityError("initial velocity is not divergence free");
    if (ops::bulk_max(ops::divergence(h0, maps.minus)) > params.tol * scale)
        throw CompatibilityError("initial magnetic field is not divergence free");
    if (spectral::max_abs(ops::normal_component(h0, maps.minus)) > params.tol * scale)
        throw CompatibilityError("initial magnetic field crosses the interface");
    if (spectral::max_abs(ops::wall_trace(u0[2])) > params.tol * scale ||
        spectral::max_abs(ops::wall_trace(h0[2])) > params.tol * scale)
        throw CompatibilityError("initial fields cross the bottom wall");

    auto j = current.at(0.0);
    BulkVector hhat0 = solve_vacuum_field(j[0], j[1], maps.plus);
    InterfaceField lam = stability_lambda(h0, hhat0);
    double lmin = lam[0];
    for (double v : lam.values())
        lmin = std::min(lmin, v);
    if (lmin < 2.0 * params.c1)
        throw StabilityError("initial fields violate the non-collinearity condition");

    PlasmaVacuumState state;
    state.f = f0;
    state.c0 = params.c0;
    state.theta = spectral::mean_project(ops::normal_component(u0, maps.minus));
    state.omega_star = ops::curl(u0, maps.minus);
    state.j_star = ops::curl(h0, maps.minus);
    state.beta = {ops::wall_mean_integral(u0[0]), ops::wall_mean_integral(u0[1])};
    state.gamma = {ops::wall_mean_integral(h0[0]), ops::wall_mean_integral(h0[1])};
    state.time = 0.0;
    state.validate();
    return state;
}

RecoveredFields recover_all(const PlasmaVacuumState& state, const MapPair& maps,
                            const SurfaceCurrent& current, double tol) {
    RecoveredFields out;
    out.u = recover_velocity(state, maps, tol);
    out.h = recover_magnetic(state, maps, tol);
    auto j = current.at(state.time);
    out.hhat = solve_vacuum_field(j[0], j[1], maps.plus, tol);
    out.p_uu = solve_pressure_pair(out.u, out.u, maps.minus, tol);
    out.p_hh = solve_pressure_pair(out.h, out.h, maps.minus, tol);
    InterfaceField tr(maps.plus.n);
    for (int c = 0; c < 3; ++c) {
        InterfaceField t = ops::trace_on_interface(out.hhat[c]);
        tr += spectral::multiply(t, t);
    }
    out.p = 0.5 * harmonic_extension(tr, maps.minus, tol) + out.p_uu - out.p_hh;
    return out;
}

} // namespace mhdsim

#pragma once

#include <array>
#include <functional>

#include "mhdsim/divcurl.hpp"

namespace mhdsim {

// imposed wall surface current (J3 = 0), time dependent with its derivative
struct SurfaceCurrent {
    std::function<std::array<InterfaceField, 2>(double)> at;
    std::function<std::array<InterfaceField, 2>(double)> dt;

    static SurfaceCurrent constant(const InterfaceField& j1, const InterfaceField& j2);
    void check_compatible(double tol = 1e-8) const; // d1 J1 + d2 J2 = 0 at t = 0
};

// iteration unknowns: interface, its velocity, reference vorticity/current,
// and the wall tangential means
struct PlasmaVacuumState {
    InterfaceField f, theta;
    BulkVector omega_star, j_star;
    std::array<double, 2> beta{0.0, 0.0}, gamma{0.0, 0.0};
    double time = 0.0;
    double c0 = 0.05;

    void validate(double tol = 1e-7) const; // throws ValidationError
};

struct MapPair {
    CoordinateMap minus; // plasma strip
    CoordinateMap plus;  // vacuum strip
};

MapPair build_maps(const InterfaceField& f, const InterfaceField& fstar, double c0, int m);

struct RecoveredFields {
    BulkVector u, h;     // plasma side
    BulkVector hhat;     // vacuum side
    BulkField p;         // plasma total pressure
    BulkField p_uu, p_hh; // cached quadratic pressure parts (may be empty)
};

struct InitParams {
    double c0 = 0.05; // gap constant (initial gap must be >= 2 c0)
    double c1 = 0.01; // stability constant (Lambda >= 2 c1)
    int m = 16;       // vertical resolution
    double tol = 1e-6;
};

PlasmaVacuumState init_state(const InterfaceField& f0, const BulkVector& u0,
                             const BulkVector& h0, const SurfaceCurrent& current,
                             const InitParams& params);

BulkVector recover_velocity(const PlasmaVacuumState& state, const MapPair& maps,
                            double tol = 1e-10);
BulkVector recover_magnetic(const PlasmaVacuumState& state, const MapPair& maps,
                            double tol = 1e-10);

BulkVector solve_vacuum_field(const InterfaceField& j1, const InterfaceField& j2,
                              const CoordinateMap& map_plus, double tol = 1e-10);
BulkVector solve_vacuum_field_dt(const InterfaceField& theta, const BulkVector& hhat,
                                 const InterfaceField& dj1, const InterfaceField& dj2,
                                 const CoordinateMap& map_plus, double tol = 1e-10);

BulkField assemble_pressure(const BulkVector& u, const BulkVector& h, const BulkVector& hhat,
                            const MapPair& maps, double tol = 1e-10);

InterfaceField compute_theta(const BulkVector& u, const CoordinateMap& map_minus);

// pointwise smallest eigenvalue of h h^T + hhat hhat^T on the interface traces
InterfaceField stability_lambda(const BulkVector& h, const BulkVector& hhat);

RecoveredFields recover_all(const PlasmaVacuumState& state, const MapPair& maps,
                            const SurfaceCurrent& current, double tol = 1e-10);

} // namespace mhdsim

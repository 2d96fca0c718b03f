#pragma once

#include <vector>

#include "mhdsim/dynamics.hpp"

namespace mhdsim {

// per-step monitor output, serialized as one JSON line by the front end
struct DiagnosticsRecord {
    double t = 0.0;
    double lambda_min = 0.0;
    double e_s = 0.0;     // coefficient-weighted interface energy
    double cal_e_s = 0.0; // Sobolev energy of (f, theta)
    double mean_f_drift = 0.0;
    double mean_theta = 0.0;
    double hn_residual = 0.0;
    double hhatn_residual = 0.0;
    double pressure_balance_residual = 0.0;
    double kinematic_residual = 0.0;
    double div_omega = 0.0;
    double div_j = 0.0;
};

// pointwise smallest eigenvalue of h h^T + hhat hhat^T from interface traces,
// with its grid minimum
std::pair<InterfaceField, double> stability_lambda(const InterfaceField& h1,
                                                   const InterfaceField& h2,
                                                   const InterfaceField& hh1,
                                                   const InterfaceField& hh2);

// interface energy of the frozen-coefficient system:
// || (dt + u.d) Ds f ||^2 + 1/2 || h.d Ds f ||^2 + 1/2 || hhat.d Ds f ||^2
// with Ds the Bessel potential of order s - 1/2
double energy_Es(const InterfaceField& fbar, const InterfaceField& dtfbar,
                 const CoefficientFreeze& fr, double s);

// || fbar ||_{H^{s+1/2}}^2 + || dtfbar ||_{H^{s-1/2}}^2
double energy_calEs(const InterfaceField& fbar, const InterfaceField& dtfbar, double s);

struct InterfaceResiduals {
    double pressure_balance = 0.0; // trace p - 1/2 |trace hhat|^2
    double h_normal = 0.0;         // h . N_f on the interface
    double hhat_normal = 0.0;      // hhat . N_f on the interface
    double kinematic = 0.0;        // theta - u . N_f
};

InterfaceResiduals interface_residuals(const PlasmaVacuumState& state,
                                       const RecoveredFields& rec, const MapPair& maps);

// sup norms of div omega and div j under the current map
std::pair<double, double> divergence_persistence(const BulkVector& omega,
                                                 const BulkVector& j,
                                                 const CoordinateMap& map);

// residuals of the recovered momentum and induction equations, formed with
// centered time differences of the recovered fields over >= 3 samples
struct LimitResiduals {
    double w_norm = 0.0; // dtu + u.grad u - h.grad h + grad p
    double b_norm = 0.0; // dth + u.grad h - h.grad u
    double w_normal = 0.0;
    double b_normal = 0.0;
    double w3_wall = 0.0;
    double b3_wall = 0.0;
    double w_wall_mean = 0.0; // wall means of w1, w2 against the beta rate
    double b_wall_mean = 0.0;
};

LimitResiduals limit_residuals(const std::vector<PlasmaVacuumState>& states,
                               const DynamicsContext& ctx);

DiagnosticsRecord make_record(const PlasmaVacuumState& state, const RecoveredFields& rec,
                              const MapPair& maps, double s, double f_mean0,
                              const InterfaceField& fstar);

} // namespace mhdsim

#pragma once

#include "mhdsim/state.hpp"

namespace mhdsim {

// interface traces of the background fields for the frozen-coefficient system
struct CoefficientFreeze {
    InterfaceField u1, u2, h1, h2, hh1, hh2;
    InterfaceField g;

    double lambda_min() const;
};

CoefficientFreeze freeze_coefficients(const RecoveredFields& rec, const MapPair& maps,
                                      double tol = 1e-10);

struct TimeStepConfig {
    double dt = 0.0; // 0 means CFL-chosen
    double cfl = 0.4;
    double dt_max = 0.1;
    double t_end = 1.0;
};

// fixed data of a direct run: imposed current, reference chart, thresholds
struct DynamicsContext {
    SurfaceCurrent current;
    InterfaceField fstar;
    double c0 = 0.05;
    double c1 = 0.01;
    int m = 16;
    double tol = 1e-10;
    bool monitor = true; // throw StabilityError when Lambda drops below c1
};

struct StateDerivative {
    InterfaceField df, dtheta;
    BulkVector domega, dj;
    std::array<double, 2> dbeta{0.0, 0.0}, dgamma{0.0, 0.0};
};

InterfaceField g_source(const RecoveredFields& rec, const MapPair& maps, double tol = 1e-10);

InterfaceField theta_rhs(const PlasmaVacuumState& state, const RecoveredFields& rec,
                         const MapPair& maps, double c1 = -1.0, double tol = 1e-10);

std::pair<BulkVector, BulkVector> vorticity_rhs(const BulkVector& omega, const BulkVector& j,
                                                const BulkVector& u, const BulkVector& h,
                                                const CoordinateMap& map);

// wall-trace quadratures for (beta1, beta2, gamma1, gamma2)
std::array<double, 4> beta_gamma_rhs(const BulkVector& u, const BulkVector& h);

std::pair<InterfaceField, InterfaceField> linearized_rhs(const InterfaceField& fbar,
                                                         const InterfaceField& thetabar,
                                                         const CoefficientFreeze& frozen,
                                                         double c1 = -1.0);

// Full right-hand side of the self-consistent system, including the
// reference-frame correction for the moving coordinate map. A recovery
// already computed for this state can be passed in to avoid redoing it.
StateDerivative evaluate_rhs(const PlasmaVacuumState& state, const DynamicsContext& ctx,
                             const RecoveredFields* rec0 = nullptr,
                             const MapPair* maps0 = nullptr);

PlasmaVacuumState rk4_step(const PlasmaVacuumState& state, double dt,
                           const DynamicsContext& ctx,
                           const RecoveredFields* rec0 = nullptr,
                           const MapPair* maps0 = nullptr);

double cfl_dt(const RecoveredFields& rec, const TimeStepConfig& cfg, int n);

} // namespace mhdsim

#pragma once

#include <vector>

#include "mhdsim/dynamics.hpp"

namespace mhdsim {

struct IterationConfig {
    double M1 = 0.0, M2 = 0.0; // norm ceilings; 0 means measure-only
    double delta0 = 0.25;      // allowed drift of f from the reference interface
    double T = 0.1;
    int samples = 16; // time intervals on [0, T]
    int max_iters = 20;
    double contraction_tol = 1e-9;
    int s = 3;
    InterfaceField fstar; // reference interface for the drift condition
};

struct TrajectoryCandidate {
    std::vector<PlasmaVacuumState> states; // uniform time grid on [0, T]
    double dt = 0.0;
};

struct MembershipReport {
    bool mean_theta_ok = false; // integral of dtf vanishes at every sample
    bool drift_ok = false;      // sup ||f - fstar||_{H^{s-1/2}} <= delta0
    bool ceiling_ok = false;    // M1/M2 ceilings (when configured)
    double max_mean_theta = 0.0;
    double max_drift = 0.0;
    double measured_m1 = 0.0;
    double measured_m2 = 0.0;
    bool pass() const { return mean_theta_ok && drift_ok && ceiling_ok; }
};

struct ContractionReport {
    std::vector<double> distances; // successive iterate distances
    std::vector<double> ratios;
    bool converged = false;
    int iterations = 0;
    double T = 0.0;
};

// Sobolev norm proxy for bulk fields: Clenshaw-Curtis-weighted horizontal
// H^sigma norms plus one vertical derivative at H^(sigma-1)
double bulk_hs_proxy(const BulkField& v, double sigma);

MembershipReport membership_check(const TrajectoryCandidate& c, const IterationConfig& cfg);

TrajectoryCandidate iterate_once(const TrajectoryCandidate& background,
                                 const IterationConfig& cfg, const DynamicsContext& ctx);

double iterate_distance(const TrajectoryCandidate& a, const TrajectoryCandidate& b, int s);

// constant-in-time starting candidate
TrajectoryCandidate constant_candidate(const PlasmaVacuumState& init,
                                       const IterationConfig& cfg);

std::pair<TrajectoryCandidate, ContractionReport>
picard_solve(const PlasmaVacuumState& init, const IterationConfig& cfg,
             const DynamicsContext& ctx);

} // namespace mhdsim

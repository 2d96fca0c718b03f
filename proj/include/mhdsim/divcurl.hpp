#pragma once

#include "mhdsim/elliptic.hpp"
#include "mhdsim/geometry.hpp"

namespace mhdsim {

struct PlasmaDivCurlData {
    BulkField g;            // prescribed divergence
    BulkVector omega;       // prescribed curl
    InterfaceField theta_bc; // v . N_f on the interface
    double alpha1 = 0.0, alpha2 = 0.0; // wall tangential mean integrals
};

struct VacuumDivCurlData {
    BulkField g;
    BulkVector omega;
    InterfaceField theta_bc;
    InterfaceField j1, j2; // surface current on the top wall (J3 = 0)
};

struct CompatibilityReport {
    double div_curl_residual = 0.0;   // || div omega ||_max
    double wall_flux_residual = 0.0;  // plasma: |int omega3 dx'|; vacuum: ||d1 J1 + d2 J2 - omega3||_max
    double volume_residual = 0.0;     // plasma only: |int g dV - int theta dx'|
    double tolerance = 0.0;
    bool pass = false;
};

CompatibilityReport validate_plasma(const PlasmaDivCurlData& data, const CoordinateMap& map,
                                    double tol = 1e-8);
CompatibilityReport validate_vacuum(const VacuumDivCurlData& data, const CoordinateMap& map,
                                    double tol = 1e-8);

BulkVector solve_plasma(const PlasmaDivCurlData& data, const CoordinateMap& map,
                        double tol = 1e-10, int max_iter = 500);
BulkVector solve_vacuum(const VacuumDivCurlData& data, const CoordinateMap& map,
                        double tol = 1e-10, int max_iter = 500);

BulkVector div_free_project(const BulkVector& w, const CoordinateMap& map, double tol = 1e-10);

} // namespace mhdsim

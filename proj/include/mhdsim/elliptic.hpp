#pragma once

#include <map>
#include <mutex>

#include <Eigen/Dense>

#include "mhdsim/geometry.hpp"

namespace mhdsim {

enum class BcType { dirichlet, neumann };

struct BoundaryCondition {
    BcType type = BcType::dirichlet;
    InterfaceField data;
};

struct EllipticProblem {
    const CoordinateMap* map = nullptr;
    BulkField rhs;
    BoundaryCondition bc_interface, bc_wall;
};

struct EllipticSolution {
    BulkField field;
    double residual_norm = 0.0;
    int iterations = 0;
};

// Defect-correction solver for the map-transformed Laplacian. The
// preconditioner is a per-Fourier-mode vertical collocation solve with
// horizontally averaged coefficients (exact when the map is horizontally
// uniform); LU factors are cached per |k|^2.
class EllipticEngine {
  public:
    EllipticEngine(const CoordinateMap& map, BcType bc_interface, BcType bc_wall);

    // one preconditioner application on an (interior rhs, boundary data) arrangement
    BulkField apply_inverse(const BulkField& rhs, const InterfaceField& data_interface,
                            const InterfaceField& data_wall) const;

    // residual of the full variable-coefficient problem, arranged row-wise
    // like the preconditioner input (boundary levels carry the BC residual)
    BulkField residual(const BulkField& u, const BulkField& rhs,
                       const InterfaceField& data_interface,
                       const InterfaceField& data_wall) const;

    EllipticSolution solve(const BulkField& rhs, const InterfaceField& data_interface,
                           const InterfaceField& data_wall, double tol, int max_iter) const;

  private:
    const CoordinateMap& map_;
    BcType bci_, bcw_;
    int n_, m_, ri_, rw_;
    Eigen::VectorXd c2_, c1_; // averaged dz3^2 / dz3 coefficient profiles
    double wint_, wwall_;     // averaged conormal weights at the faces
    const Eigen::PartialPivLU<Eigen::MatrixXd>& factor(long k2) const;
    mutable std::map<long, Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
    mutable std::mutex mu_;
};

EllipticSolution solve(const EllipticProblem& problem, double tol = 1e-10, int max_iter = 500);

BulkField harmonic_extension(const InterfaceField& psi, const CoordinateMap& map,
                             double tol = 1e-10);
BulkField harmonic_extension_hat(const BulkField& g, const CoordinateMap& map,
                                 double tol = 1e-10);
InterfaceField dn_operator(const InterfaceField& psi, const CoordinateMap& map,
                           double tol = 1e-10);
InterfaceField dn_hat(const BulkField& g, const CoordinateMap& map, double tol = 1e-10);
InterfaceField dn_bar(const BulkField& g, const CoordinateMap& map_plus,
                      const CoordinateMap& map_minus, double tol = 1e-10);
BulkField solve_pressure_pair(const BulkVector& v1, const BulkVector& v2,
                              const CoordinateMap& map_minus, double tol = 1e-10);

} // namespace mhdsim

#pragma once

#include <array>

#include "mhdsim/chebyshev.hpp"
#include "mhdsim/spectral.hpp"

namespace mhdsim {

enum class Side { plasma, vacuum };

// flat reference strip: plasma z3 in [-1,0], vacuum z3 in [0,1]
const ChebGrid& strip_grid(Side side, int m);
int interface_level(Side side, int m); // level index of the z3 = 0 face
int wall_level(Side side, int m);

// Scalar on the N x N x (M+1) reference strip grid, level-major storage
// (vertical level l is the slowest index; level 0 is the top of the strip).
class BulkField {
  public:
    BulkField() : side_(Side::plasma), n_(0), m_(0) {}
    BulkField(Side side, int n, int m, double fill = 0.0)
        : side_(side), n_(n), m_(m),
          v_(static_cast<size_t>(n) * n * (m + 1), fill) {}

    Side side() const { return side_; }
    int grid_size() const { return n_; }
    int levels() const { return m_; } // m (level count is m+1)
    size_t size() const { return v_.size(); }

    double& at(int i, int j, int l) {
        return v_[(static_cast<size_t>(l) * n_ + j) * n_ + i];
    }
    double at(int i, int j, int l) const {
        return v_[(static_cast<size_t>(l) * n_ + j) * n_ + i];
    }
    double& operator[](size_t k) { return v_[k]; }
    double operator[](size_t k) const { return v_[k]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    InterfaceField level(int l) const;
    void set_level(int l, const InterfaceField& g);

    BulkField& operator+=(const BulkField& o);
    BulkField& operator-=(const BulkField& o);
    BulkField& operator*=(double a);
    friend BulkField operator+(BulkField a, const BulkField& b) { return a += b; }
    friend BulkField operator-(BulkField a, const BulkField& b) { return a -= b; }
    friend BulkField operator*(double a, BulkField b) { return b *= a; }

    void check_compatible(const BulkField& o) const;
    void check_finite(const char* what) const;

  private:
    Side side_;
    int n_, m_;
    std::vector<double> v_;
};

struct BulkVector {
    std::array<BulkField, 3> c;
    BulkVector() = default;
    BulkVector(Side side, int n, int m)
        : c{BulkField(side, n, m), BulkField(side, n, m), BulkField(side, n, m)} {}
    BulkField& operator[](int i) { return c[i]; }
    const BulkField& operator[](int i) const { return c[i]; }
    BulkVector& operator+=(const BulkVector& o);
    BulkVector& operator-=(const BulkVector& o);
    BulkVector& operator*=(double a);
    friend BulkVector operator+(BulkVector a, const BulkVector& b) { return a += b; }
    friend BulkVector operator-(BulkVector a, const BulkVector& b) { return a -= b; }
    friend BulkVector operator*(double a, BulkVector b) { return b *= a; }
};

// interface height with spectral tangential derivatives; N_f = (-d1f, -d2f, 1)
struct Interface {
    InterfaceField f, d1f, d2f;
    double c0 = 0.0;
    int grid_size() const { return f.grid_size(); }
};

Interface build_interface(const InterfaceField& f, double c0);

// Discrete coordinate map from the flat strip to the physical domain
// Omega_f, parametrized through the reference chart Psi = Phi_{fstar}.
// Horizontal components are the identity; only the height is solved for.
// Physical derivatives on grid data: d/dx1 = dz1 + q1*dz3, d/dx2 = dz2 + q2*dz3,
// d/dx3 = q3*dz3.
struct CoordinateMap {
    Side side = Side::plasma;
    int n = 0, m = 0;
    Interface interface, ref_interface;
    BulkField x3;      // physical height X^3(z)
    BulkField base3;   // chart height Psi^3(z) (equals z3 when fstar = 0)
    BulkField q1, q2, q3;
    BulkField dz3x3;   // volume element of the chart-to-physical composite
    BulkField jac_det; // Jacobian determinant of Phi: Omega_* -> Omega_f
};

// defined in elliptic.cpp (the general reference interface needs an elliptic solve)
CoordinateMap harmonic_coordinate_map(const Interface& f, const Interface& fstar,
                                      Side side, int m, double tol = 1e-10);

namespace ops {

BulkField dz1(const BulkField& v);
BulkField dz2(const BulkField& v);
BulkField dz3(const BulkField& v);

BulkVector gradient(const BulkField& v, const CoordinateMap& map);
BulkField divergence(const BulkVector& w, const CoordinateMap& map);
BulkVector curl(const BulkVector& w, const CoordinateMap& map);
BulkField laplacian(const BulkField& v, const CoordinateMap& map);

InterfaceField trace_on_interface(const BulkField& v);
InterfaceField wall_trace(const BulkField& v);
// N_f . grad v at the interface face
InterfaceField conormal_interface(const BulkField& v, const CoordinateMap& map);
// e3 . grad v at the wall face
InterfaceField dz_wall(const BulkField& v, const CoordinateMap& map);
// v . N_f at the interface face
InterfaceField normal_component(const BulkVector& v, const CoordinateMap& map);

double bulk_l2(const BulkField& v, const CoordinateMap& map); // physical-volume L2
double bulk_max(const BulkField& v);
double bulk_max(const BulkVector& v);
double wall_mean_integral(const BulkField& v); // integral of wall trace over T^2

BulkField multiply(const BulkField& a, const BulkField& b); // dealiased per level
BulkField dealias(const BulkField& v, double fraction = 2.0 / 3.0);

} // namespace ops

} // namespace mhdsim

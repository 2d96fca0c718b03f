#pragma once

#include <functional>
#include <vector>

#include "mhdsim/fft.hpp"

namespace mhdsim {

// Real scalar field on the N x N uniform grid of [0,2pi)^2.
// Storage is row-major with the x1 index fastest: values[j*N + i] = g(x1_i, x2_j).
class InterfaceField {
  public:
    InterfaceField() : n_(0) {}
    explicit InterfaceField(int n, double fill = 0.0)
        : n_(n), v_(static_cast<size_t>(n) * n, fill) {}
    InterfaceField(int n, std::vector<double> values);

    int grid_size() const { return n_; }
    size_t size() const { return v_.size(); }
    double& operator()(int i, int j) { return v_[static_cast<size_t>(j) * n_ + i]; }
    double operator()(int i, int j) const { return v_[static_cast<size_t>(j) * n_ + i]; }
    double& operator[](size_t k) { return v_[k]; }
    double operator[](size_t k) const { return v_[k]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    InterfaceField& operator+=(const InterfaceField& o);
    InterfaceField& operator-=(const InterfaceField& o);
    InterfaceField& operator*=(double a);
    friend InterfaceField operator+(InterfaceField a, const InterfaceField& b) { return a += b; }
    friend InterfaceField operator-(InterfaceField a, const InterfaceField& b) { return a -= b; }
    friend InterfaceField operator*(double a, InterfaceField b) { return b *= a; }

    void check_finite(const char* what) const;

    // builds a field from a callable of (x1, x2)
    static InterfaceField sample(int n, const std::function<double(double, double)>& fn);

  private:
    int n_;
    std::vector<double> v_;
};

struct SpectralSettings {
    int n = 32;
    double dealias_fraction = 2.0 / 3.0;
    int s = 3;
};

namespace spectral {

std::vector<Complex> to_spectral(const InterfaceField& g);
InterfaceField to_physical(int n, const std::vector<Complex>& coeffs);

// applies a complex Fourier multiplier m(k1, k2)
InterfaceField apply_multiplier(const InterfaceField& g,
                                const std::function<Complex(int, int)>& m);

InterfaceField fourier_derivative(const InterfaceField& g, int axis, int order);
InterfaceField sobolev_weight(const InterfaceField& g, double sigma);
double hs_norm(const InterfaceField& g, double sigma);
double mean(const InterfaceField& g);
InterfaceField mean_project(const InterfaceField& g);
InterfaceField dealias(const InterfaceField& g, double fraction = 2.0 / 3.0);
InterfaceField multiply(const InterfaceField& a, const InterfaceField& b,
                        double fraction = 2.0 / 3.0); // dealiased product
InterfaceField commutator_lambda_s(const InterfaceField& a, const InterfaceField& u,
                                   double sigma, double fraction = 2.0 / 3.0);

double max_abs(const InterfaceField& g);

} // namespace spectral

} // namespace mhdsim

#pragma once

#include <complex>
#include <vector>

namespace mhdsim {

using Complex = std::complex<double>;

// Cached 2-D complex FFT of size n x n (row-major, second index fastest).
// Forward transform is normalized by 1/n^2 so that coefficient (0,0) is the mean.
class Fft2 {
  public:
    static const Fft2& plan(int n);

    void forward(const double* in, Complex* out) const;
    void inverse(const Complex* in, double* out) const;

    std::vector<Complex> forward(const std::vector<double>& in) const;
    std::vector<double> inverse(const std::vector<Complex>& in) const;

    int size() const { return n_; }

    // signed wavenumber for index i on an n-point grid, in [-n/2, n/2]
    static int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

  private:
    explicit Fft2(int n);
    int n_;
    void* fwd_; // fftw_plan
    void* bwd_;
};

} // namespace mhdsim

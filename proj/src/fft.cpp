#include "mhdsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {
std::mutex cache_mutex;
std::map<int, std::unique_ptr<Fft2>>& cache() {
    static std::map<int, std::unique_ptr<Fft2>> c;
    return c;
}
} // namespace

Fft2::Fft2(int n) : n_(n) {
    if (n < 4 || (n & (n - 1)) != 0)
        throw ValidationError("grid size must be a power of two >= 4");
    // plan on scratch buffers; execution uses fftw_execute_dft on caller arrays
    std::vector<Complex> a(static_cast<size_t>(n) * n), b(a.size());
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    fwd_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

const Fft2& Fft2::plan(int n) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& c = cache();
    auto it = c.find(n);
    if (it == c.end())
        it = c.emplace(n, std::unique_ptr<Fft2>(new Fft2(n))).first;
    return *it->second;
}

void Fft2::forward(const double* in, Complex* out) const {
    const size_t total = static_cast<size_t>(n_) * n_;
    std::vector<Complex> buf(total);
    for (size_t i = 0; i < total; ++i)
        buf[i] = Complex(in[i], 0.0);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                     reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / static_cast<double>(total);
    for (size_t i = 0; i < total; ++i)
        out[i] *= scale;
}

void Fft2::inverse(const Complex* in, double* out) const {
    const size_t total = static_cast<size_t>(n_) * n_;
    std::vector<Complex> buf(total), res(total);
    std::copy(in, in + total, buf.begin());
    fftw_execute_dft(static_cast<fftw_plan>(bwd_),
                     reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(res.data()));
    for (size_t i = 0; i < total; ++i)
        out[i] = res[i].real();
}

std::vector<Complex> Fft2::forward(const std::vector<double>& in) const {
    std::vector<Complex> out(in.size());
    forward(in.data(), out.data());
    return out;
}

std::vector<double> Fft2::inverse(const std::vector<Complex>& in) const {
    std::vector<double> out(in.size());
    inverse(in.data(), out.data());
    return out;
}

} // namespace mhdsim

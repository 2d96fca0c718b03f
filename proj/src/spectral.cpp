#include "mhdsim/spectral.hpp"

#include <cmath>
#include <numbers>

#include "mhdsim/errors.hpp"

namespace mhdsim {

InterfaceField::InterfaceField(int n, std::vector<double> values) : n_(n), v_(std::move(values)) {
    if (v_.size() != static_cast<size_t>(n) * n)
        throw GridMismatch("interface field size mismatch");
}

InterfaceField& InterfaceField::operator+=(const InterfaceField& o) {
    if (o.n_ != n_)
        throw GridMismatch("interface field grid mismatch");
    for (size_t k = 0; k < v_.size(); ++k)
        v_[k] += o.v_[k];
    return *this;
}

InterfaceField& InterfaceField::operator-=(const InterfaceField& o) {
    if (o.n_ != n_)
        throw GridMismatch("interface field grid mismatch");
    for (size_t k = 0; k < v_.size(); ++k)
        v_[k] -= o.v_[k];
    return *this;
}

InterfaceField& InterfaceField::operator*=(double a) {
    for (double& x : v_)
        x *= a;
    return *this;
}

void InterfaceField::check_finite(const char* what) const {
    for (double x : v_)
        if (!std::isfinite(x))
            throw InvalidField(std::string("non-finite values in ") + what);
}

InterfaceField InterfaceField::sample(int n, const std::function<double(double, double)>& fn) {
    InterfaceField g(n);
    const double h = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            g(i, j) = fn(i * h, j * h);
    return g;
}

namespace spectral {

std::vector<Complex> to_spectral(const InterfaceField& g) {
    return Fft2::plan(g.grid_size()).forward(g.values());
}

InterfaceField to_physical(int n, const std::vector<Complex>& coeffs) {
    return InterfaceField(n, Fft2::plan(n).inverse(coeffs));
}

InterfaceField apply_multiplier(const InterfaceField& g,
                                const std::function<Complex(int, int)>& m) {
    g.check_finite("apply_multiplier input");
    const int n = g.grid_size();
    auto c = to_spectral(g);
    for (int j = 0; j < n; ++j) {
        const int k2 = Fft2::wavenumber(j, n);
        for (int i = 0; i < n; ++i) {
            const int k1 = Fft2::wavenumber(i, n);
            c[static_cast<size_t>(j) * n + i] *= m(k1, k2);
        }
    }
    return to_physical(n, c);
}

InterfaceField fourier_derivative(const InterfaceField& g, int axis, int order) {
    if (axis != 1 && axis != 2)
        throw ValidationError("derivative axis must be 1 or 2");
    if (order < 0 || order > 4)
        throw ValidationError("derivative order must be in [0,4]");
    if (order == 0)
        return g;
    return apply_multiplier(g, [axis, order](int k1, int k2) {
        const double k = axis == 1 ? k1 : k2;
        return std::pow(Complex(0.0, k), order);
    });
}

InterfaceField sobolev_weight(const InterfaceField& g, double sigma) {
    return apply_multiplier(g, [sigma](int k1, int k2) {
        return Complex(std::pow(1.0 + double(k1) * k1 + double(k2) * k2, 0.5 * sigma), 0.0);
    });
}

double hs_norm(const InterfaceField& g, double sigma) {
    g.check_finite("hs_norm input");
    const int n = g.grid_size();
    auto c = to_spectral(g);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const int k2 = Fft2::wavenumber(j, n);
        for (int i = 0; i < n; ++i) {
            const int k1 = Fft2::wavenumber(i, n);
            const double w = std::pow(1.0 + double(k1) * k1 + double(k2) * k2, sigma);
            sum += w * std::norm(c[static_cast<size_t>(j) * n + i]);
        }
    }
    // Parseval: sum |c_k|^2 = (1/(2pi)^2) * integral g^2
    const double area = 4.0 * std::numbers::pi * std::numbers::pi;
    return std::sqrt(area * sum);
}

double mean(const InterfaceField& g) {
    double s = 0.0;
    for (double x : g.values())
        s += x;
    return s / static_cast<double>(g.size());
}

InterfaceField mean_project(const InterfaceField& g) {
    g.check_finite("mean_project input");
    InterfaceField out = g;
    const double m = mean(g);
    for (double& x : out.values())
        x -= m;
    return out;
}

InterfaceField dealias(const InterfaceField& g, double fraction) {
    g.check_finite("dealias input");
    const int n = g.grid_size();
    const int cutoff = static_cast<int>(std::floor(fraction * n / 2.0));
    return apply_multiplier(g, [cutoff](int k1, int k2) {
        return (std::abs(k1) > cutoff || std::abs(k2) > cutoff) ? Complex(0.0, 0.0)
                                                                : Complex(1.0, 0.0);
    });
}

InterfaceField multiply(const InterfaceField& a, const InterfaceField& b, double fraction) {
    if (a.grid_size() != b.grid_size())
        throw GridMismatch("product grid mismatch");
    InterfaceField out(a.grid_size());
    for (size_t k = 0; k < out.size(); ++k)
        out[k] = a[k] * b[k];
    return dealias(out, fraction);
}

InterfaceField commutator_lambda_s(const InterfaceField& a, const InterfaceField& u,
                                   double sigma, double fraction) {
    InterfaceField first = multiply(a, sobolev_weight(u, sigma), fraction);
    InterfaceField second = sobolev_weight(multiply(a, u, fraction), sigma);
    return first - second;
}

double max_abs(const InterfaceField& g) {
    double m = 0.0;
    for (double x : g.values())
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace spectral

} // namespace mhdsim

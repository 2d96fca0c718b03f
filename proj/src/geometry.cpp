#include "mhdsim/geometry.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mhdsim/errors.hpp"

namespace mhdsim {

const ChebGrid& strip_grid(Side side, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, ChebGrid> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(side == Side::plasma ? 0 : 1, m);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const double a = side == Side::plasma ? -1.0 : 0.0;
        const double b = side == Side::plasma ? 0.0 : 1.0;
        it = cache.emplace(key, ChebGrid(m, a, b)).first;
    }
    return it->second;
}

int interface_level(Side side, int m) { return side == Side::plasma ? 0 : m; }
int wall_level(Side side, int m) { return side == Side::plasma ? m : 0; }

InterfaceField BulkField::level(int l) const {
    InterfaceField g(n_);
    const size_t off = static_cast<size_t>(l) * n_ * n_;
    std::copy(v_.begin() + off, v_.begin() + off + static_cast<size_t>(n_) * n_,
              g.values().begin());
    return g;
}

void BulkField::set_level(int l, const InterfaceField& g) {
    if (g.grid_size() != n_)
        throw GridMismatch("set_level grid mismatch");
    const size_t off = static_cast<size_t>(l) * n_ * n_;
    std::copy(g.values().begin(), g.values().end(), v_.begin() + off);
}

void BulkField::check_compatible(const BulkField& o) const {
    if (o.side_ != side_ || o.n_ != n_ || o.m_ != m_)
        throw GridMismatch("bulk field grid mismatch");
}

void BulkField::check_finite(const char* what) const {
    for (double x : v_)
        if (!std::isfinite(x))
            throw InvalidField(std::string("non-finite values in ") + what);
}

BulkField& BulkField::operator+=(const BulkField& o) {
    check_compatible(o);
    for (size_t k = 0; k < v_.size(); ++k)
        v_[k] += o.v_[k];
    return *this;
}

BulkField& BulkField::operator-=(const BulkField& o) {
    check_compatible(o);
    for (size_t k = 0; k < v_.size(); ++k)
        v_[k] -= o.v_[k];
    return *this;
}

BulkField& BulkField::operator*=(double a) {
    for (double& x : v_)
        x *= a;
    return *this;
}

BulkVector& BulkVector::operator+=(const BulkVector& o) {
    for (int i = 0; i < 3; ++i)
        c[i] += o.c[i];
    return *this;
}
BulkVector& BulkVector::operator-=(const BulkVector& o) {
    for (int i = 0; i < 3; ++i)
        c[i] -= o.c[i];
    return *this;
}
BulkVector& BulkVector::operator*=(double a) {
    for (int i = 0; i < 3; ++i)
        c[i] *= a;
    return *this;
}

Interface build_interface(const InterfaceField& f, double c0) {
    f.check_finite("interface height");
    if (c0 <= 0.0 || c0 >= 1.0)
        throw ValidationError("gap constant must lie in (0,1)");
    if (spectral::max_abs(f) > 1.0 - c0)
        throw GapViolation("interface height exceeds 1 - c0");
    Interface g;
    g.f = f;
    g.d1f = spectral::fourier_derivative(f, 1, 1);
    g.d2f = spectral::fourier_derivative(f, 2, 1);
    g.c0 = c0;
    return g;
}

namespace ops {

BulkField dz1(const BulkField& v) {
    BulkField out(v.side(), v.grid_size(), v.levels());
    for (int l = 0; l <= v.levels(); ++l)
        out.set_level(l, spectral::fourier_derivative(v.level(l), 1, 1));
    return out;
}

BulkField dz2(const BulkField& v) {
    BulkField out(v.side(), v.grid_size(), v.levels());
    for (int l = 0; l <= v.levels(); ++l)
        out.set_level(l, spectral::fourier_derivative(v.level(l), 2, 1));
    return out;
}

BulkField dz3(const BulkField& v) {
    const ChebGrid& g = strip_grid(v.side(), v.levels());
    const int m = v.levels();
    const size_t plane = static_cast<size_t>(v.grid_size()) * v.grid_size();
    BulkField out(v.side(), v.grid_size(), m);
    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const Mat> in(v.values().data(), m + 1, plane);
    Eigen::Map<Mat> res(out.values().data(), m + 1, plane);
    res.noalias() = g.d1 * in;
    return out;
}

BulkField multiply(const BulkField& a, const BulkField& b) {
    a.check_compatible(b);
    BulkField out(a.side(), a.grid_size(), a.levels());
    for (int l = 0; l <= a.levels(); ++l)
        out.set_level(l, spectral::multiply(a.level(l), b.level(l)));
    return out;
}

BulkField dealias(const BulkField& v, double fraction) {
    BulkField out(v.side(), v.grid_size(), v.levels());
    for (int l = 0; l <= v.levels(); ++l)
        out.set_level(l, spectral::dealias(v.level(l), fraction));
    return out;
}

BulkVector gradient(const BulkField& v, const CoordinateMap& map) {
    BulkField d3 = dz3(v);
    BulkVector g(v.side(), v.grid_size(), v.levels());
    g[0] = dz1(v) + multiply(map.q1, d3);
    g[1] = dz2(v) + multiply(map.q2, d3);
    g[2] = multiply(map.q3, d3);
    return g;
}

BulkField divergence(const BulkVector& w, const CoordinateMap& map) {
    BulkField out = gradient(w[0], map)[0];
    out += gradient(w[1], map)[1];
    out += gradient(w[2], map)[2];
    return out;
}

BulkVector curl(const BulkVector& w, const CoordinateMap& map) {
    BulkVector g0 = gradient(w[0], map);
    BulkVector g1 = gradient(w[1], map);
    BulkVector g2 = gradient(w[2], map);
    BulkVector out(w[0].side(), w[0].grid_size(), w[0].levels());
    out[0] = g2[1] - g1[2];
    out[1] = g0[2] - g2[0];
    out[2] = g1[0] - g0[1];
    return out;
}

BulkField laplacian(const BulkField& v, const CoordinateMap& map) {
    return divergence(gradient(v, map), map);
}

InterfaceField trace_on_interface(const BulkField& v) {
    return v.level(interface_level(v.side(), v.levels()));
}

InterfaceField wall_trace(const BulkField& v) {
    return v.level(wall_level(v.side(), v.levels()));
}

InterfaceField conormal_interface(const BulkField& v, const CoordinateMap& map) {
    BulkVector g = gradient(v, map);
    InterfaceField out = trace_on_interface(g[2]);
    out -= spectral::multiply(map.interface.d1f, trace_on_interface(g[0]));
    out -= spectral::multiply(map.interface.d2f, trace_on_interface(g[1]));
    return out;
}

InterfaceField dz_wall(const BulkField& v, const CoordinateMap& map) {
    return wall_trace(gradient(v, map)[2]);
}

InterfaceField normal_component(const BulkVector& v, const CoordinateMap& map) {
    InterfaceField out = trace_on_interface(v[2]);
    out -= spectral::multiply(map.interface.d1f, trace_on_interface(v[0]));
    out -= spectral::multiply(map.interface.d2f, trace_on_interface(v[1]));
    return out;
}

double bulk_l2(const BulkField& v, const CoordinateMap& map) {
    const ChebGrid& g = strip_grid(v.side(), v.levels());
    const int n = v.grid_size();
    const double h2 = std::pow(2.0 * std::numbers::pi / n, 2);
    double sum = 0.0;
    for (int l = 0; l <= v.levels(); ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                sum += v.at(i, j, l) * v.at(i, j, l) * map.dz3x3.at(i, j, l) * g.weights[l] * h2;
    return std::sqrt(std::max(sum, 0.0));
}

double bulk_max(const BulkField& v) {
    double m = 0.0;
    for (double x : v.values())
        m = std::max(m, std::abs(x));
    return m;
}

double bulk_max(const BulkVector& v) {
    double m = 0.0;
    for (size_t k = 0; k < v[0].size(); ++k)
        m = std::max(m, std::sqrt(v[0][k] * v[0][k] + v[1][k] * v[1][k] + v[2][k] * v[2][k]));
    return m;
}

double wall_mean_integral(const BulkField& v) {
    const int n = v.grid_size();
    const double h2 = std::pow(2.0 * std::numbers::pi / n, 2);
    double sum = 0.0;
    InterfaceField w = wall_trace(v);
    for (double x : w.values())
        sum += x;
    return sum * h2;
}

} // namespace ops

} // namespace mhdsim

#include "mhdsim/elliptic.hpp"

#include <cmath>
#include <numbers>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

double level_mean(const BulkField& v, int l) {
    const int n = v.grid_size();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            s += v.at(i, j, l);
    return s / (static_cast<double>(n) * n);
}

double rms(const BulkField& v) {
    double s = 0.0;
    for (double x : v.values())
        s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

// spectral cube: per-level horizontal Fourier coefficients
std::vector<Complex> to_cube(const BulkField& v) {
    const int n = v.grid_size(), m = v.levels();
    const size_t plane = static_cast<size_t>(n) * n;
    std::vector<Complex> cube(plane * (m + 1));
    const Fft2& fft = Fft2::plan(n);
    for (int l = 0; l <= m; ++l)
        fft.forward(v.values().data() + l * plane, cube.data() + l * plane);
    return cube;
}

BulkField from_cube(Side side, int n, int m, const std::vector<Complex>& cube) {
    BulkField out(side, n, m);
    const size_t plane = static_cast<size_t>(n) * n;
    const Fft2& fft = Fft2::plan(n);
    for (int l = 0; l <= m; ++l)
        fft.inverse(cube.data() + l * plane, out.values().data() + l * plane);
    return out;
}

} // namespace

EllipticEngine::EllipticEngine(const CoordinateMap& map, BcType bci, BcType bcw)
    : map_(map), bci_(bci), bcw_(bcw), n_(map.n), m_(map.m),
      ri_(interface_level(map.side, map.m)), rw_(wall_level(map.side, map.m)) {
    BulkField d3q1 = ops::dz3(map.q1), d3q2 = ops::dz3(map.q2), d3q3 = ops::dz3(map.q3);
    c2_.resize(m_ + 1);
    c1_.resize(m_ + 1);
    for (int l = 0; l <= m_; ++l) {
        double s2 = 0.0, s1 = 0.0;
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i) {
                const double a = map.q1.at(i, j, l), b = map.q2.at(i, j, l),
                             c = map.q3.at(i, j, l);
                s2 += a * a + b * b + c * c;
                s1 += a * d3q1.at(i, j, l) + b * d3q2.at(i, j, l) + c * d3q3.at(i, j, l);
            }
        const double cnt = static_cast<double>(n_) * n_;
        c2_[l] = s2 / cnt;
        c1_[l] = s1 / cnt;
    }
    double w = 0.0;
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i)
            w += -map.interface.d1f(i, j) * map.q1.at(i, j, ri_) -
                 map.interface.d2f(i, j) * map.q2.at(i, j, ri_) + map.q3.at(i, j, ri_);
    wint_ = w / (static_cast<double>(n_) * n_);
    wwall_ = level_mean(map.q3, rw_);
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& EllipticEngine::factor(long k2) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = lu_.find(k2);
    if (it != lu_.end())
        return it->second;
    const ChebGrid& g = strip_grid(map_.side, m_);
    Eigen::MatrixXd D2 = g.d1 * g.d1;
    Eigen::MatrixXd A = c2_.asDiagonal() * D2 + c1_.asDiagonal() * g.d1;
    A.diagonal().array() -= static_cast<double>(k2);
    A.row(ri_).setZero();
    if (bci_ == BcType::dirichlet)
        A(ri_, ri_) = 1.0;
    else
        A.row(ri_) = wint_ * g.d1.row(ri_);
    A.row(rw_).setZero();
    if (bcw_ == BcType::dirichlet)
        A(rw_, rw_) = 1.0;
    else
        A.row(rw_) = wwall_ * g.d1.row(rw_);
    if (k2 == 0 && bci_ == BcType::neumann && bcw_ == BcType::neumann) {
        // singular mode of the pure-Neumann problem: pin the weighted mean
        const int mid = m_ / 2;
        A.row(mid) = g.weights.transpose();
    }
    return lu_.emplace(k2, Eigen::PartialPivLU<Eigen::MatrixXd>(A)).first->second;
}

BulkField EllipticEngine::apply_inverse(const BulkField& rhs, const InterfaceField& di,
                                        const InterfaceField& dw) const {
    auto cube = to_cube(rhs);
    auto ci = spectral::to_spectral(di);
    auto cw = spectral::to_spectral(dw);
    const size_t plane = static_cast<size_t>(n_) * n_;
    const bool pure_neumann = bci_ == BcType::neumann && bcw_ == BcType::neumann;
    Eigen::Matrix<double, Eigen::Dynamic, 2> b(m_ + 1, 2), x(m_ + 1, 2);
    for (int j = 0; j < n_; ++j) {
        const long k2v = Fft2::wavenumber(j, n_);
        for (int i = 0; i < n_; ++i) {
            const long k1v = Fft2::wavenumber(i, n_);
            const long k2 = k1v * k1v + k2v * k2v;
            const size_t idx = static_cast<size_t>(j) * n_ + i;
            for (int l = 0; l <= m_; ++l) {
                const Complex c = cube[l * plane + idx];
                b(l, 0) = c.real();
                b(l, 1) = c.imag();
            }
            b(ri_, 0) = ci[idx].real();
            b(ri_, 1) = ci[idx].imag();
            b(rw_, 0) = cw[idx].real();
            b(rw_, 1) = cw[idx].imag();
            if (k2 == 0 && pure_neumann) {
                b(m_ / 2, 0) = 0.0;
                b(m_ / 2, 1) = 0.0;
            }
            x = factor(k2).solve(b);
            for (int l = 0; l <= m_; ++l)
                cube[l * plane + idx] = Complex(x(l, 0), x(l, 1));
        }
    }
    return from_cube(map_.side, n_, m_, cube);
}

BulkField EllipticEngine::residual(const BulkField& u, const BulkField& rhs,
                                   const InterfaceField& di, const InterfaceField& dw) const {
    BulkField r = rhs - ops::laplacian(u, map_);
    InterfaceField rint = di - (bci_ == BcType::dirichlet ? ops::trace_on_interface(u)
                                                          : ops::conormal_interface(u, map_));
    InterfaceField rwall = dw - (bcw_ == BcType::dirichlet ? ops::wall_trace(u)
                                                           : ops::dz_wall(u, map_));
    r.set_level(ri_, rint);
    r.set_level(rw_, rwall);
    return r;
}

EllipticSolution EllipticEngine::solve(const BulkField& rhs, const InterfaceField& di,
                                       const InterfaceField& dw, double tol,
                                       int max_iter) const {
    rhs.check_finite("elliptic rhs");
    di.check_finite("elliptic interface data");
    dw.check_finite("elliptic wall data");
    // uniqueness: identically zero data has the zero solution
    auto all_zero = [](const std::vector<double>& v) {
        for (double x : v)
            if (x != 0.0)
                return false;
        return true;
    };
    if (all_zero(rhs.values()) && all_zero(di.values()) && all_zero(dw.values())) {
        EllipticSolution sol;
        sol.field = BulkField(map_.side, n_, m_);
        return sol;
    }
    if (bci_ == BcType::neumann && bcw_ == BcType::neumann) {
        // solvability of the pure-Neumann problem (divergence theorem)
        const ChebGrid& g = strip_grid(map_.side, m_);
        const double h2 = std::pow(2.0 * std::numbers::pi / n_, 2);
        double vol = 0.0;
        for (int l = 0; l <= m_; ++l)
            for (int j = 0; j < n_; ++j)
                for (int i = 0; i < n_; ++i)
                    vol += rhs.at(i, j, l) * map_.dz3x3.at(i, j, l) * g.weights[l] * h2;
        double flux = 0.0;
        for (size_t k = 0; k < di.size(); ++k)
            flux += di[k] * h2;
        double fw = 0.0;
        for (size_t k = 0; k < dw.size(); ++k)
            fw += dw[k] * h2;
        const double sgn = map_.side == Side::plasma ? 1.0 : -1.0;
        const double mismatch = vol - sgn * (flux - fw);
        if (std::abs(mismatch) > 1e-8 * std::max(1.0, rms(rhs) + spectral::max_abs(di) +
                                                          spectral::max_abs(dw)))
            throw IncompatibleData("pure-Neumann data violates the divergence theorem");
    }

    EllipticSolution sol;
    sol.field = BulkField(map_.side, n_, m_);
    BulkField r = residual(sol.field, rhs, di, dw);
    const double r0 = rms(r);
    const double target = tol * std::max(r0, 1.0);
    double rn = r0;
    while (rn > target) {
        if (sol.iterations >= max_iter)
            throw EllipticDivergence("elliptic iteration cap reached");
        if (sol.iterations >= 3 && rn > 100.0 * std::max(r0, 1e-300))
            throw EllipticDivergence("elliptic defect correction diverged");
        sol.field += apply_inverse(r, r.level(ri_), r.level(rw_));
        r = residual(sol.field, rhs, di, dw);
        rn = rms(r);
        ++sol.iterations;
    }
    sol.residual_norm = rn;
    return sol;
}

EllipticSolution solve(const EllipticProblem& problem, double tol, int max_iter) {
    if (problem.map == nullptr)
        throw ValidationError("elliptic problem has no coordinate map");
    EllipticEngine engine(*problem.map, problem.bc_interface.type, problem.bc_wall.type);
    return engine.solve(problem.rhs, problem.bc_interface.data, problem.bc_wall.data, tol,
                        max_iter);
}

BulkField harmonic_extension(const InterfaceField& psi, const CoordinateMap& map, double tol) {
    EllipticEngine engine(map, BcType::dirichlet, BcType::neumann);
    return engine
        .solve(BulkField(map.side, map.n, map.m), psi, InterfaceField(map.n), tol, 500)
        .field;
}

BulkField harmonic_extension_hat(const BulkField& g, const CoordinateMap& map, double tol) {
    EllipticEngine engine(map, BcType::dirichlet, BcType::neumann);
    return engine
        .solve(BulkField(map.side, map.n, map.m), ops::trace_on_interface(g),
               ops::dz_wall(g, map), tol, 500)
        .field;
}

InterfaceField dn_operator(const InterfaceField& psi, const CoordinateMap& map, double tol) {
    const double sgn = map.side == Side::plasma ? 1.0 : -1.0;
    return sgn * ops::conormal_interface(harmonic_extension(psi, map, tol), map);
}

InterfaceField dn_hat(const BulkField& g, const CoordinateMap& map, double tol) {
    const double sgn = map.side == Side::plasma ? 1.0 : -1.0;
    return sgn * ops::conormal_interface(harmonic_extension_hat(g, map, tol), map);
}

InterfaceField dn_bar(const BulkField& g, const CoordinateMap& map_plus,
                      const CoordinateMap& map_minus, double tol) {
    return dn_hat(g, map_plus, tol) - dn_operator(ops::trace_on_interface(g), map_minus, tol);
}

BulkField solve_pressure_pair(const BulkVector& v1, const BulkVector& v2,
                              const CoordinateMap& map, double tol) {
    std::array<BulkVector, 3> g1, g2;
    for (int i = 0; i < 3; ++i) {
        g1[i] = ops::gradient(v1[i], map);
        g2[i] = ops::gradient(v2[i], map);
    }
    BulkField rhs(map.side, map.n, map.m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            rhs -= ops::multiply(g1[j][i], g2[i][j]);
    EllipticEngine engine(map, BcType::dirichlet, BcType::neumann);
    return engine.solve(rhs, InterfaceField(map.n), InterfaceField(map.n), tol, 500).field;
}

// ---- harmonic coordinate maps -------------------------------------------

namespace {

// exact discrete harmonic height on the flat strip: Dirichlet f on the
// interface face, -/+1 on the wall, solved per horizontal Fourier mode
BulkField flat_chart_height(const Interface& f, Side side, int m) {
    const int n = f.grid_size();
    const ChebGrid& g = strip_grid(side, m);
    const int ri = interface_level(side, m), rw = wall_level(side, m);
    const double wallval = side == Side::plasma ? -1.0 : 1.0;
    auto cf = spectral::to_spectral(f.f);
    const size_t plane = static_cast<size_t>(n) * n;
    std::vector<Complex> cube(plane * (m + 1));
    std::map<long, Eigen::PartialPivLU<Eigen::MatrixXd>> lus;
    Eigen::MatrixXd D2 = g.d1 * g.d1;
    Eigen::Matrix<double, Eigen::Dynamic, 2> b(m + 1, 2), x(m + 1, 2);
    for (int j = 0; j < n; ++j) {
        const long k2v = Fft2::wavenumber(j, n);
        for (int i = 0; i < n; ++i) {
            const long k1v = Fft2::wavenumber(i, n);
            const long k2 = k1v * k1v + k2v * k2v;
            auto it = lus.find(k2);
            if (it == lus.end()) {
                Eigen::MatrixXd A = D2;
                A.diagonal().array() -= static_cast<double>(k2);
                A.row(ri).setZero();
                A(ri, ri) = 1.0;
                A.row(rw).setZero();
                A(rw, rw) = 1.0;
                it = lus.emplace(k2, Eigen::PartialPivLU<Eigen::MatrixXd>(A)).first;
            }
            b.setZero();
            const size_t idx = static_cast<size_t>(j) * n + i;
            b(ri, 0) = cf[idx].real();
            b(ri, 1) = cf[idx].imag();
            if (k2 == 0)
                b(rw, 0) = wallval;
            x = it->second.solve(b);
            for (int l = 0; l <= m; ++l)
                cube[l * plane + idx] = Complex(x(l, 0), x(l, 1));
        }
    }
    return from_cube(side, n, m, cube);
}

BulkField reference_height(Side side, int n, int m) {
    const ChebGrid& g = strip_grid(side, m);
    BulkField z3(side, n, m);
    for (int l = 0; l <= m; ++l)
        z3.set_level(l, InterfaceField(n, g.nodes[l]));
    return z3;
}

CoordinateMap finish_map(Side side, int n, int m, const Interface& f, const Interface& fstar,
                         BulkField x3, BulkField base3) {
    CoordinateMap map;
    map.side = side;
    map.n = n;
    map.m = m;
    map.interface = f;
    map.ref_interface = fstar;
    map.dz3x3 = ops::dz3(x3);
    BulkField d1x3 = ops::dz1(x3), d2x3 = ops::dz2(x3);
    BulkField dz3base = ops::dz3(base3);
    map.q1 = BulkField(side, n, m);
    map.q2 = BulkField(side, n, m);
    map.q3 = BulkField(side, n, m);
    map.jac_det = BulkField(side, n, m);
    for (size_t k = 0; k < x3.size(); ++k) {
        const double a33 = map.dz3x3[k];
        if (!(a33 > 0.0))
            throw DegenerateMap("coordinate map folds over");
        map.q3[k] = 1.0 / a33;
        map.q1[k] = -d1x3[k] / a33;
        map.q2[k] = -d2x3[k] / a33;
        map.jac_det[k] = a33 / dz3base[k];
        if (!(map.jac_det[k] >= 0.1))
            throw DegenerateMap("coordinate map Jacobian below the 0.1 floor");
    }
    map.x3 = std::move(x3);
    map.base3 = std::move(base3);
    return map;
}

} // namespace

CoordinateMap harmonic_coordinate_map(const Interface& f, const Interface& fstar, Side side,
                                      int m, double tol) {
    const int n = f.grid_size();
    if (fstar.grid_size() != n)
        throw GridMismatch("reference interface grid mismatch");
    if (spectral::max_abs(fstar.f) == 0.0) {
        BulkField x3 = flat_chart_height(f, side, m);
        return finish_map(side, n, m, f, fstar, std::move(x3), reference_height(side, n, m));
    }
    // chart the reference domain Omega_{fstar} first, then solve the
    // chart-transformed Laplace problem for the physical height
    Interface flat = build_interface(InterfaceField(n), std::max(fstar.c0, 1e-6));
    CoordinateMap base = harmonic_coordinate_map(fstar, flat, side, m, tol);
    BulkField x3;
    if (f.f.values() == fstar.f.values()) {
        x3 = base.x3;
    } else {
        EllipticEngine engine(base, BcType::dirichlet, BcType::dirichlet);
        const double wallval = side == Side::plasma ? -1.0 : 1.0;
        x3 = engine
                 .solve(BulkField(side, n, m), f.f, InterfaceField(n, wallval), tol, 500)
                 .field;
    }
    return finish_map(side, n, m, f, fstar, std::move(x3), base.x3);
}

} // namespace mhdsim

#include "mhdsim/divcurl.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mhdsim/errors.hpp"

namespace mhdsim {

namespace {

constexpr double kArea = 4.0 * std::numbers::pi * std::numbers::pi;

struct SideCache {
    Eigen::MatrixXd D;
    std::map<long, Eigen::PartialPivLU<Eigen::MatrixXd>> helm; // v3 Helmholtz, k != 0
    Eigen::PartialPivLU<Eigen::MatrixXd> integ_wall;      // D with wall row pinned
    Eigen::PartialPivLU<Eigen::MatrixXd> integ_interface; // D with interface row pinned
};

// flat-strip per-mode inverse caches, keyed by (side, m, wall_neumann)
std::map<std::tuple<int, int, int>, SideCache>& side_caches() {
    static std::map<std::tuple<int, int, int>, SideCache> c;
    return c;
}
std::mutex cache_mutex;

SideCache& get_cache(Side side, int m, bool wall_neumann) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_tuple(side == Side::plasma ? 0 : 1, m, wall_neumann ? 1 : 0);
    auto it = side_caches().find(key);
    if (it == side_caches().end()) {
        SideCache sc;
        const ChebGrid& g = strip_grid(side, m);
        sc.D = g.d1;
        Eigen::MatrixXd Dw = g.d1;
        const int rw = wall_level(side, m), ri = interface_level(side, m);
        Dw.row(rw).setZero();
        Dw(rw, rw) = 1.0;
        sc.integ_wall = Eigen::PartialPivLU<Eigen::MatrixXd>(Dw);
        Eigen::MatrixXd Di = g.d1;
        Di.row(ri).setZero();
        Di(ri, ri) = 1.0;
        sc.integ_interface = Eigen::PartialPivLU<Eigen::MatrixXd>(Di);
        it = side_caches().emplace(key, std::move(sc)).first;
    }
    return it->second;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& helm_factor(SideCache& sc, Side side, int m,
                                                        bool wall_neumann, long k2) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = sc.helm.find(k2);
    if (it != sc.helm.end())
        return it->second;
    const ChebGrid& g = strip_grid(side, m);
    Eigen::MatrixXd A = g.d1 * g.d1;
    A.diagonal().array() -= static_cast<double>(k2);
    const int ri = interface_level(side, m), rw = wall_level(side, m);
    A.row(ri).setZero();
    A(ri, ri) = 1.0;
    A.row(rw).setZero();
    if (wall_neumann)
        A.row(rw) = g.d1.row(rw);
    else
        A(rw, rw) = 1.0;
    return sc.helm.emplace(k2, Eigen::PartialPivLU<Eigen::MatrixXd>(A)).first->second;
}

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

Eigen::VectorXcd gather(const std::vector<Complex>& cube, size_t plane, size_t idx, int m) {
    Eigen::VectorXcd v(m + 1);
    for (int l = 0; l <= m; ++l)
        v[l] = cube[l * plane + idx];
    return v;
}

void scatter(std::vector<Complex>& cube, size_t plane, size_t idx, const Eigen::VectorXcd& v) {
    for (int l = 0; l < v.size(); ++l)
        cube[l * plane + idx] = v[l];
}

Eigen::VectorXcd lu_solve(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                          const Eigen::VectorXcd& b) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> rb(b.size(), 2);
    rb.col(0) = b.real();
    rb.col(1) = b.imag();
    Eigen::Matrix<double, Eigen::Dynamic, 2> x = lu.solve(rb);
    Eigen::VectorXcd out(b.size());
    out.real() = x.col(0);
    out.imag() = x.col(1);
    return out;
}

// Exact solver of the flat-strip div-curl system, used as the defect-correction
// inverse for curved maps. Solves:
//   div v = g, curl v = omega, v3(interface) = theta (Dirichlet),
//   wall: v3 = 0 (plasma/lift) or d3 v3 = wall_data (vacuum with prescribed
//   tangential current), k = 0 tangential components anchored at the wall.
BulkVector flat_inverse(Side side, int n, int m, const BulkField& g, const BulkVector& omega,
                        const InterfaceField& theta, bool wall_neumann,
                        const InterfaceField& wall_data, double anchor1, double anchor2,
                        bool anchor_v3_at_interface, double v3_anchor) {
    SideCache& sc = get_cache(side, m, wall_neumann);
    const int ri = interface_level(side, m), rw = wall_level(side, m);
    const size_t plane = static_cast<size_t>(n) * n;
    auto cg = to_cube(g);
    auto cw1 = to_cube(omega[0]);
    auto cw2 = to_cube(omega[1]);
    auto cw3 = to_cube(omega[2]);
    auto ct = spectral::to_spectral(theta);
    auto cwd = spectral::to_spectral(wall_data);
    std::vector<Complex> v1c(cg.size()), v2c(cg.size()), v3c(cg.size());
    const Complex I(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const long k2v = Fft2::wavenumber(j, n);
        for (int i = 0; i < n; ++i) {
            const long k1v = Fft2::wavenumber(i, n);
            const long k2 = k1v * k1v + k2v * k2v;
            const size_t idx = static_cast<size_t>(j) * n + i;
            Eigen::VectorXcd gv = gather(cg, plane, idx, m);
            Eigen::VectorXcd w1 = gather(cw1, plane, idx, m);
            Eigen::VectorXcd w2 = gather(cw2, plane, idx, m);
            Eigen::VectorXcd w3 = gather(cw3, plane, idx, m);
            Eigen::VectorXcd v1(m + 1), v2(m + 1), v3(m + 1);
            if (k2 == 0) {
                // vertical integration of the zero mode
                Eigen::VectorXcd b = gv;
                if (anchor_v3_at_interface) {
                    b[ri] = Complex(v3_anchor, 0.0);
                    v3 = lu_solve(sc.integ_interface, b);
                } else {
                    b[rw] = Complex(v3_anchor, 0.0);
                    v3 = lu_solve(sc.integ_wall, b);
                }
                Eigen::VectorXcd b1 = w2; // d3 v1 = omega2 at k = 0
                b1[rw] = Complex(anchor1, 0.0);
                v1 = lu_solve(sc.integ_wall, b1);
                Eigen::VectorXcd b2 = -w1; // d3 v2 = -omega1
                b2[rw] = Complex(anchor2, 0.0);
                v2 = lu_solve(sc.integ_wall, b2);
            } else {
                Eigen::VectorXcd rhs3 =
                    sc.D * gv - I * double(k1v) * w2 + I * double(k2v) * w1;
                rhs3[ri] = ct[idx];
                rhs3[rw] = wall_neumann ? cwd[idx] : Complex(0.0, 0.0);
                v3 = lu_solve(helm_factor(sc, side, m, wall_neumann, k2), rhs3);
                Eigen::VectorXcd d = gv - sc.D * v3;
                const double kk = static_cast<double>(k2);
                v1 = -(I * double(k1v) * d - I * double(k2v) * w3) / kk;
                v2 = -(I * double(k2v) * d + I * double(k1v) * w3) / kk;
            }
            scatter(v1c, plane, idx, v1);
            scatter(v2c, plane, idx, v2);
            scatter(v3c, plane, idx, v3);
        }
    }
    BulkVector v(side, n, m);
    v[0] = from_cube(side, n, m, v1c);
    v[1] = from_cube(side, n, m, v2c);
    v[2] = from_cube(side, n, m, v3c);
    return v;
}

double interface_max(const InterfaceField& g) { return spectral::max_abs(g); }

// Low-pass filter in the vertical Chebyshev modes (keeps degrees <= 2m/3).
// The defect loop feeds the curl residual back through vertical derivatives
// of the correction, which amplifies near-grid-scale vertical oscillations;
// genuine residuals of smooth fields carry no such modes, so the filter
// removes only the unstable noise. The analogue of horizontal dealiasing.
const Eigen::MatrixXd& cheb_filter_matrix(int m) {
    static std::map<int, Eigen::MatrixXd> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end())
        return it->second;
    const int kc = 2 * m / 3;
    Eigen::MatrixXd S(m + 1, m + 1), A(m + 1, m + 1);
    for (int l = 0; l <= m; ++l)
        for (int k = 0; k <= m; ++k) {
            const double ck = (k == 0 || k == m) ? 2.0 : 1.0;
            const double cl = (l == 0 || l == m) ? 2.0 : 1.0;
            const double c = std::cos(std::numbers::pi * k * l / m);
            S(l, k) = (k <= kc) ? c : 0.0;
            A(k, l) = 2.0 * c / (ck * cl * m);
        }
    return cache.emplace(m, S * A).first->second;
}

void cheb_filter(BulkField& v) {
    const int n = v.grid_size(), m = v.levels();
    const Eigen::MatrixXd& F = cheb_filter_matrix(m);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
        v.values().data(), m + 1, static_cast<Eigen::Index>(n) * n);
    M = F * M;
}

// The flat inverse enforces the horizontal curl equations at interior
// collocation rows only (the face rows of the vertical solve carry boundary
// conditions), so face-row residuals of omega1/omega2 are not correctable and
// must stay out of the defect loop. The omega3 equation has no vertical
// coupling and is enforced at every row.
void zero_face_levels(BulkVector& w, int m) {
    const InterfaceField zero(w[0].grid_size());
    for (int c = 0; c < 2; ++c) {
        w[c].set_level(0, zero);
        w[c].set_level(m, zero);
    }
}

} // namespace

CompatibilityReport validate_plasma(const PlasmaDivCurlData& data, const CoordinateMap& map,
                                    double tol) {
    CompatibilityReport rep;
    rep.div_curl_residual = ops::bulk_max(ops::divergence(data.omega, map));
    rep.wall_flux_residual = std::abs(ops::wall_mean_integral(data.omega[2]));
    const ChebGrid& g = strip_grid(map.side, map.m);
    const double h2 = std::pow(2.0 * std::numbers::pi / map.n, 2);
    double vol = 0.0;
    for (int l = 0; l <= map.m; ++l)
        for (int j = 0; j < map.n; ++j)
            for (int i = 0; i < map.n; ++i)
                vol += data.g.at(i, j, l) * map.dz3x3.at(i, j, l) * g.weights[l] * h2;
    double th = 0.0;
    for (double x : data.theta_bc.values())
        th += x * h2;
    rep.volume_residual = std::abs(vol - th);
    const double scale = std::max(1.0, ops::bulk_max(data.omega) + ops::bulk_max(data.g) +
                                           interface_max(data.theta_bc));
    rep.tolerance = tol * scale;
    rep.pass = rep.div_curl_residual <= rep.tolerance &&
               rep.wall_flux_residual <= rep.tolerance &&
               rep.volume_residual <= rep.tolerance;
    return rep;
}

CompatibilityReport validate_vacuum(const VacuumDivCurlData& data, const CoordinateMap& map,
                                    double tol) {
    CompatibilityReport rep;
    rep.div_curl_residual = ops::bulk_max(ops::divergence(data.omega, map));
    InterfaceField divj = spectral::fourier_derivative(data.j1, 1, 1) +
                          spectral::fourier_derivative(data.j2, 2, 1);
    rep.wall_flux_residual = spectral::max_abs(divj - ops::wall_trace(data.omega[2]));
    rep.volume_residual = 0.0;
    const double scale = std::max(1.0, ops::bulk_max(data.omega) + ops::bulk_max(data.g) +
                                           interface_max(data.j1) + interface_max(data.j2));
    rep.tolerance = tol * scale;
    rep.pass = rep.div_curl_residual <= rep.tolerance &&
               rep.wall_flux_residual <= rep.tolerance;
    return rep;
}

BulkVector solve_plasma(const PlasmaDivCurlData& data, const CoordinateMap& map, double tol,
                        int max_iter) {
    if (map.side != Side::plasma)
        throw GridMismatch("plasma solver needs a plasma-side map");
    CompatibilityReport guard = validate_plasma(data, map, 1e-6);
    if (!guard.pass)
        throw CompatibilityError("plasma div-curl data violates the solvability conditions");

    const int n = map.n, m = map.m;
    BulkVector v(Side::plasma, n, m);
    auto residuals = [&](const BulkVector& cur, BulkField& rg, BulkVector& rw,
                         InterfaceField& rt, double& ra1, double& ra2) {
        rg = data.g - ops::divergence(cur, map);
        rw = data.omega - ops::curl(cur, map);
        cheb_filter(rg);
        for (int c = 0; c < 3; ++c)
            cheb_filter(rw[c]);
        zero_face_levels(rw, m);
        rt = data.theta_bc - ops::normal_component(cur, map);
        ra1 = data.alpha1 - ops::wall_mean_integral(cur[0]);
        ra2 = data.alpha2 - ops::wall_mean_integral(cur[1]);
    };
    BulkField rg;
    BulkVector rw;
    InterfaceField rt;
    double ra1 = 0.0, ra2 = 0.0;
    residuals(v, rg, rw, rt, ra1, ra2);
    auto norm = [&]() {
        return std::max({ops::bulk_max(rg), ops::bulk_max(rw), interface_max(rt),
                         std::abs(ra1) / kArea, std::abs(ra2) / kArea});
    };
    const double r0 = norm();
    const double target = tol * std::max(r0, 1.0);
    int iter = 0;
    double rn = r0;
    while (rn > target) {
        if (iter >= max_iter)
            throw EllipticDivergence("plasma div-curl iteration cap reached");
        if (iter >= 3 && rn > 100.0 * std::max(r0, 1e-300))
            throw EllipticDivergence("plasma div-curl defect correction diverged");
        v += flat_inverse(Side::plasma, n, m, rg, rw, rt, false, InterfaceField(n),
                          ra1 / kArea, ra2 / kArea, false, 0.0);
        residuals(v, rg, rw, rt, ra1, ra2);
        rn = norm();
        ++iter;
    }
    return v;
}

BulkVector div_free_project(const BulkVector& w, const CoordinateMap& map, double tol) {
    EllipticEngine engine(map, BcType::dirichlet, BcType::neumann);
    BulkField phi = engine
                        .solve(ops::divergence(w, map), InterfaceField(map.n),
                               InterfaceField(map.n), tol, 500)
                        .field;
    return w - ops::gradient(phi, map);
}

BulkVector solve_vacuum(const VacuumDivCurlData& data, const CoordinateMap& map, double tol,
                        int max_iter) {
    if (map.side != Side::vacuum)
        throw GridMismatch("vacuum solver needs a vacuum-side map");
    CompatibilityReport guard = validate_vacuum(data, map, 1e-6);
    if (!guard.pass)
        throw CompatibilityError("vacuum div-curl data violates the solvability conditions");

    const int n = map.n, m = map.m;
    // step 1: curl lift with vanishing normal components; wall tangential means
    // pinned so the remaining wall data has zero mean
    const double m1 = -spectral::mean(data.j2), m2 = spectral::mean(data.j1);
    BulkVector lift(Side::vacuum, n, m);
    {
        BulkField zero_g(Side::vacuum, n, m);
        auto residuals = [&](const BulkVector& cur, BulkField& rg, BulkVector& rw,
                             InterfaceField& rt, double& ra1, double& ra2) {
            rg = zero_g - ops::divergence(cur, map);
            rw = data.omega - ops::curl(cur, map);
            cheb_filter(rg);
            for (int c = 0; c < 3; ++c)
                cheb_filter(rw[c]);
            zero_face_levels(rw, m);
            rt = InterfaceField(n) - ops::normal_component(cur, map);
            ra1 = m1 - spectral::mean(ops::wall_trace(cur[0]));
            ra2 = m2 - spectral::mean(ops::wall_trace(cur[1]));
        };
        BulkField rg;
        BulkVector rw;
        InterfaceField rt;
        double ra1 = 0.0, ra2 = 0.0;
        residuals(lift, rg, rw, rt, ra1, ra2);
        auto norm = [&]() {
            return std::max({ops::bulk_max(rg), ops::bulk_max(rw), interface_max(rt),
                             std::abs(ra1), std::abs(ra2)});
        };
        const double r0 = norm();
        const double target = tol * std::max(r0, 1.0);
        int iter = 0;
        double rn = r0;
        while (rn > target) {
            if (iter >= max_iter)
                throw EllipticDivergence("vacuum curl-lift iteration cap reached");
            if (iter >= 3 && rn > 100.0 * std::max(r0, 1e-300))
                throw EllipticDivergence("vacuum curl-lift defect correction diverged");
            lift += flat_inverse(Side::vacuum, n, m, rg, rw, rt, false, InterfaceField(n),
                                 ra1, ra2, false, 0.0);
            residuals(lift, rg, rw, rt, ra1, ra2);
            rn = norm();
            ++iter;
        }
    }

    // step 2: stream function for the residual wall tangential data
    InterfaceField t1 = (-1.0) * (data.j2 + ops::wall_trace(lift[0]));
    InterfaceField t2 = data.j1 - ops::wall_trace(lift[1]);
    auto c1 = spectral::to_spectral(t1);
    auto c2 = spectral::to_spectral(t2);
    std::vector<Complex> cj(c1.size());
    const Complex I(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const long k2v = Fft2::wavenumber(j, n);
        for (int i = 0; i < n; ++i) {
            const long k1v = Fft2::wavenumber(i, n);
            const long k2 = k1v * k1v + k2v * k2v;
            const size_t idx = static_cast<size_t>(j) * n + i;
            cj[idx] = k2 == 0 ? Complex(0.0, 0.0)
                              : -I * (double(k1v) * c1[idx] + double(k2v) * c2[idx]) /
                                    static_cast<double>(k2);
        }
    }
    InterfaceField jhat = spectral::to_physical(n, cj);

    // step 3: vertical cutoff extension, supported away from the interface
    const ChebGrid& grid = strip_grid(Side::vacuum, m);
    BulkField jtilde(Side::vacuum, n, m);
    for (int l = 0; l <= m; ++l) {
        const double z = grid.nodes[l];
        double chi;
        if (z <= 0.45)
            chi = 0.0;
        else if (z >= 0.9)
            chi = 1.0;
        else {
            const double s = (z - 0.45) / 0.45;
            chi = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
        }
        jtilde.set_level(l, chi * jhat);
    }

    // step 4: mixed problem restoring divergence and the interface datum
    BulkField rhs = ops::laplacian(jtilde, map) - data.g;
    InterfaceField neu = ops::conormal_interface(jtilde, map) - data.theta_bc;
    EllipticEngine engine(map, BcType::neumann, BcType::dirichlet);
    BulkField phi = engine.solve(rhs, neu, InterfaceField(n), tol, max_iter).field;

    BulkVector h = lift;
    h += ops::gradient(jtilde, map);
    h -= ops::gradient(phi, map);
    return h;
}

} // namespace mhdsim

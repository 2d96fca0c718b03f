#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mhdsim/errors.hpp"
#include "mhdsim/geometry.hpp"

using namespace mhdsim;
using testutil::max_diff;

namespace {
const int N = 32, M = 16;

Interface flat_interface(int n = N) { return build_interface(InterfaceField(n), 0.05); }

BulkField sample_bulk(Side side, int n, int m,
                      const std::function<double(double, double, double)>& fn) {
    const ChebGrid& g = strip_grid(side, m);
    BulkField out(side, n, m);
    const double h = 2.0 * M_PI / n;
    for (int l = 0; l <= m; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                out.at(i, j, l) = fn(i * h, j * h, g.nodes[l]);
    return out;
}
} // namespace

TEST_CASE("interface normals") {
    Interface flat = flat_interface();
    CHECK(spectral::max_abs(flat.d1f) < 1e-13);
    CHECK(spectral::max_abs(flat.d2f) < 1e-13);

    InterfaceField f = InterfaceField::sample(N, [](double x1, double) {
        return 0.1 * std::cos(x1);
    });
    Interface curved = build_interface(f, 0.05);
    InterfaceField n1 = InterfaceField::sample(N, [](double x1, double) {
        return 0.1 * std::sin(x1); // -d1f
    });
    CHECK(max_diff(-1.0 * curved.d1f, n1) < 1e-12);
    CHECK(spectral::max_abs(curved.d2f) < 1e-12);
}

TEST_CASE("gap violation") {
    CHECK_THROWS_AS(build_interface(InterfaceField(N, 0.999), 0.05), GapViolation);
}

TEST_CASE("identity map for matching interfaces") {
    Interface flat = flat_interface();
    CoordinateMap map = harmonic_coordinate_map(flat, flat, Side::plasma, M);
    const ChebGrid& g = strip_grid(Side::plasma, M);
    for (int l = 0; l <= M; ++l) {
        CHECK(spectral::max_abs(map.x3.level(l) - InterfaceField(N, g.nodes[l])) < 1e-12);
    }
    CHECK(ops::bulk_max(map.jac_det - BulkField(Side::plasma, N, M, 1.0)) < 1e-12);
    CHECK(ops::bulk_max(map.q1) < 1e-12);
    CHECK(ops::bulk_max(map.q3 - BulkField(Side::plasma, N, M, 1.0)) < 1e-12);
}

TEST_CASE("curved identity: f equal to fstar gives unit Jacobian") {
    InterfaceField f = InterfaceField::sample(N, [](double x1, double) {
        return 0.1 * std::cos(x1);
    });
    Interface itf = build_interface(f, 0.05);
    CoordinateMap map = harmonic_coordinate_map(itf, itf, Side::plasma, M);
    CHECK(ops::bulk_max(map.jac_det - BulkField(Side::plasma, N, M, 1.0)) < 1e-10);
}

TEST_CASE("harmonic map oracle on the flat strip") {
    const double eps = 0.1;
    InterfaceField f = InterfaceField::sample(N, [&](double x1, double) {
        return eps * std::cos(x1);
    });
    CoordinateMap map =
        harmonic_coordinate_map(build_interface(f, 0.05), flat_interface(), Side::plasma, M);
    BulkField expect = sample_bulk(Side::plasma, N, M, [&](double x1, double, double z) {
        return z + eps * std::cos(x1) * std::sinh(z + 1.0) / std::sinh(1.0);
    });
    CHECK(ops::bulk_max(map.x3 - expect) < 1e-10);

    // boundary data exact at collocation points
    CHECK(max_diff(ops::trace_on_interface(map.x3), f) < 1e-12);
    CHECK(spectral::max_abs(ops::wall_trace(map.x3) - InterfaceField(N, -1.0)) < 1e-12);
}

TEST_CASE("degenerate map rejected") {
    InterfaceField f = InterfaceField::sample(N, [](double x1, double) {
        return 0.9 * std::cos(x1);
    });
    CHECK_THROWS_AS(
        harmonic_coordinate_map(build_interface(f, 0.05), flat_interface(), Side::plasma, M),
        DegenerateMap);
}

TEST_CASE("physical gradient on the identity map") {
    Interface flat = flat_interface();
    CoordinateMap map = harmonic_coordinate_map(flat, flat, Side::plasma, M);

    BulkField z3 = sample_bulk(Side::plasma, N, M, [](double, double, double z) { return z; });
    BulkVector g = ops::gradient(z3, map);
    CHECK(ops::bulk_max(g[0]) < 1e-11);
    CHECK(ops::bulk_max(g[1]) < 1e-11);
    CHECK(ops::bulk_max(g[2] - BulkField(Side::plasma, N, M, 1.0)) < 1e-11);

    BulkField c1 = sample_bulk(Side::plasma, N, M, [](double x1, double, double) {
        return std::cos(x1);
    });
    BulkVector gc = ops::gradient(c1, map);
    BulkField expect = sample_bulk(Side::plasma, N, M, [](double x1, double, double) {
        return -std::sin(x1);
    });
    CHECK(ops::bulk_max(gc[0] - expect) < 1e-11);
    CHECK(ops::bulk_max(gc[2]) < 1e-11);
}

TEST_CASE("gradient of the map height is vertical unit") {
    InterfaceField f = InterfaceField::sample(N, [](double x1, double x2) {
        return 0.08 * std::cos(x1) + 0.05 * std::sin(x2);
    });
    CoordinateMap map =
        harmonic_coordinate_map(build_interface(f, 0.05), flat_interface(), Side::plasma, M);
    BulkVector g = ops::gradient(map.x3, map);
    CHECK(ops::bulk_max(g[0]) < 1e-9);
    CHECK(ops::bulk_max(g[1]) < 1e-9);
    CHECK(ops::bulk_max(g[2] - BulkField(Side::plasma, N, M, 1.0)) < 1e-9);
}

TEST_CASE("trace chain rule") {
    InterfaceField f = InterfaceField::sample(N, [](double x1, double) {
        return 0.1 * std::cos(x1);
    });
    CoordinateMap map =
        harmonic_coordinate_map(build_interface(f, 0.05), flat_interface(), Side::plasma, M);
    // analytic function of the physical coordinates, sampled through the map
    BulkField v(Side::plasma, N, M);
    const double h = 2.0 * M_PI / N;
    for (int l = 0; l <= M; ++l)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const double x3 = map.x3.at(i, j, l);
                v.at(i, j, l) = std::cos(i * h) * (x3 + 1.0) * (x3 + 1.0);
            }
    BulkVector g = ops::gradient(v, map);
    InterfaceField lhs = spectral::fourier_derivative(ops::trace_on_interface(v), 1, 1);
    InterfaceField rhs = ops::trace_on_interface(g[0]) +
                         spectral::multiply(ops::trace_on_interface(g[2]), map.interface.d1f);
    CHECK(max_diff(lhs, rhs) < 1e-8);
}

TEST_CASE("vacuum side map") {
    InterfaceField f = InterfaceField::sample(N, [](double x1, double) {
        return 0.1 * std::cos(x1);
    });
    CoordinateMap map =
        harmonic_coordinate_map(build_interface(f, 0.05), flat_interface(), Side::vacuum, M);
    BulkField expect = sample_bulk(Side::vacuum, N, M, [&](double x1, double, double z) {
        return z + 0.1 * std::cos(x1) * std::sinh(1.0 - z) / std::sinh(1.0);
    });
    CHECK(ops::bulk_max(map.x3 - expect) < 1e-10);
    CHECK(max_diff(ops::trace_on_interface(map.x3), f) < 1e-12);
    CHECK(spectral::max_abs(ops::wall_trace(map.x3) - InterfaceField(N, 1.0)) < 1e-12);
}

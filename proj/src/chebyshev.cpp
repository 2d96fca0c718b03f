#include "mhdsim/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "mhdsim/errors.hpp"

namespace mhdsim {

ChebGrid::ChebGrid(int m_, double a_, double b_) : m(m_), a(a_), b(b_) {
    if (m < 4)
        throw ValidationError("vertical resolution must be at least 4");
    const double pi = std::numbers::pi;
    nodes.resize(m + 1);
    for (int l = 0; l <= m; ++l)
        nodes[l] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(pi * l / m);

    // differentiation matrix on the standard [-1,1] nodes, then scaled
    Eigen::VectorXd x(m + 1), c(m + 1);
    for (int l = 0; l <= m; ++l) {
        x[l] = std::cos(pi * l / m);
        c[l] = (l == 0 || l == m) ? 2.0 : 1.0;
    }
    d1.setZero(m + 1, m + 1);
    for (int i = 0; i <= m; ++i) {
        double diag = 0.0;
        for (int j = 0; j <= m; ++j) {
            if (i == j)
                continue;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d1(i, j) = (c[i] / c[j]) * sign / (x[i] - x[j]);
            diag -= d1(i, j);
        }
        d1(i, i) = diag;
    }
    d1 *= 2.0 / (b - a);

    // Clenshaw-Curtis weights (exact for polynomials of degree m)
    weights.setZero(m + 1);
    for (int l = 0; l <= m; ++l) {
        double w = 1.0;
        for (int k = 1; k <= m / 2; ++k) {
            const double bk = (2 * k == m) ? 1.0 : 2.0;
            w -= bk * std::cos(2.0 * k * pi * l / m) / (4.0 * k * k - 1.0);
        }
        w *= 2.0 / m;
        if (l == 0 || l == m)
            w *= 0.5;
        weights[l] = w * 0.5 * (b - a);
    }
}

} // namespace mhdsim

#pragma once

#include <Eigen/Dense>

namespace mhdsim {

// Chebyshev-Lobatto collocation on [a,b] with m+1 nodes in descending order:
// nodes[0] = b, nodes[m] = a.
struct ChebGrid {
    int m = 0;
    double a = 0.0, b = 0.0;
    Eigen::VectorXd nodes;
    Eigen::MatrixXd d1;      // spectral differentiation matrix
    Eigen::VectorXd weights; // Clenshaw-Curtis quadrature weights

    ChebGrid() = default;
    ChebGrid(int m, double a, double b);
};

} // namespace mhdsim

#pragma once

#include <cmath>
#include <random>

#include "mhdsim/spectral.hpp"

namespace testutil {

// random real band-limited field with modes up to kmax
inline mhdsim::InterfaceField random_band_limited(int n, int kmax, std::mt19937& rng,
                                                  double amplitude = 1.0) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * M_PI);
    mhdsim::InterfaceField g(n);
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = 0; k2 <= kmax; ++k2) {
            if (k2 == 0 && k1 < 0)
                continue;
            const double a = amp(rng) * amplitude, p = phase(rng);
            const double h = 2.0 * M_PI / n;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    g(i, j) += a * std::cos(k1 * i * h + k2 * j * h + p);
        }
    return g;
}

inline double max_diff(const mhdsim::InterfaceField& a, const mhdsim::InterfaceField& b) {
    return mhdsim::spectral::max_abs(a - b);
}

} // namespace testutil

#pragma once

#include "hbell/fock.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testutil {

inline hbell::CoefficientVector random_state(std::mt19937_64& rng, std::size_t cutoff, bool nonneg = false) {
    std::normal_distribution<double> g;
    std::vector<double> c(cutoff + 1);
    for (double& x : c) x = nonneg ? std::abs(g(rng)) : g(rng);
    return hbell::normalize(hbell::CoefficientVector(c));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace testutil

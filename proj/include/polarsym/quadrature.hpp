#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace polarsym::quadrature {

/// N-point Gauss-Legendre rule on [-1, 1].
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre() {
        // Newton iteration on P_N from the Chebyshev-like initial guesses.
        for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
            double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = z;
                for (std::size_t k = 2; k <= N; ++k) {
                    double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                    p0 = p1;
                    p1 = pk;
                }
                dp = static_cast<double>(N) * (z * p1 - p0) / (z * z - 1.0);
                double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            double w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[N - 1 - i] = z;
            weights[i] = w;
            weights[N - 1 - i] = w;
        }
    }
};

template <std::size_t N>
const GaussLegendre<N>& gauss_legendre() {
    static const GaussLegendre<N> rule;
    return rule;
}

/// Integral of fn over [a, b] with the N-point rule.
template <std::size_t N = 16, class F>
double integrate(F&& fn, double a, double b) {
    const auto& rule = gauss_legendre<N>();
    double half = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) sum += rule.weights[i] * fn(mid + half * rule.nodes[i]);
    return sum * half;
}

}  // namespace polarsym::quadrature

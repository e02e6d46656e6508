#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fradi {

/// Grunwald-Letnikov coefficient sequence g_{alpha,k} = (-1)^k binom(alpha,k)
/// for one fractional order 1 < alpha <= 2.
///
/// Sign pattern: coeffs[0] = 1, coeffs[1] = -alpha, and coeffs[k] > 0 for
/// k >= 2 when alpha < 2. Partial sums decrease in magnitude toward zero,
/// which is what makes the shifted difference operators diagonally dominant.
struct GrunwaldWeights {
    double alpha = 0.0;
    std::vector<double> coeffs;

    std::size_t size() const { return coeffs.size(); }
    double operator[](std::size_t k) const { return coeffs[k]; }
};

/// Computes g_{alpha,k} for k = 0..count-1 by the stable recurrence
/// g_0 = 1, g_k = g_{k-1} * (k - 1 - alpha) / k.
///
/// Requires 1 < alpha <= 2 and count >= 2.
inline GrunwaldWeights grunwald_weights(double alpha, std::size_t count) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw std::invalid_argument("grunwald_weights: alpha must lie in (1, 2]");
    if (count < 2)
        throw std::invalid_argument("grunwald_weights: need at least two coefficients");

    GrunwaldWeights w;
    w.alpha = alpha;
    w.coeffs.resize(count);
    w.coeffs[0] = 1.0;
    for (std::size_t k = 1; k < count; ++k)
        w.coeffs[k] = w.coeffs[k - 1] * (static_cast<double>(k) - 1.0 - alpha)
                      / static_cast<double>(k);
    return w;
}

} // namespace fradi

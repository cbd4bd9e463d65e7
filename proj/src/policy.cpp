#include "banditlab/policy.hpp"

#include <algorithm>
#include <cmath>

namespace banditlab {

std::size_t sample_index(std::span<const double> p, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cum += p[i];
        if (u < cum) return i;
    }
    return p.size() - 1;
}

std::vector<double> exp3_distribution(std::span<const double> log_weights, double scale, double gamma) {
    const std::size_t n = log_weights.size();
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    std::vector<double> p(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = std::exp((log_weights[i] - top) / scale);
        sum += p[i];
    }
    const double floor = gamma / static_cast<double>(n);
    for (double& x : p) x = (1.0 - gamma) * x / sum + floor;
    return p;
}

}  // namespace banditlab

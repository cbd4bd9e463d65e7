#include "banditlab/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace banditlab {

DiagnosticRadius diagnostic_rad_prime(double alpha, std::uint64_t pulls, std::size_t rounds, double log_t,
                                      double d1, double d2) {
    if (pulls < 1) throw std::invalid_argument("diagnostic radius needs N_i >= 1");
    const double n = static_cast<double>(pulls);
    const double k = static_cast<double>(rounds);
    DiagnosticRadius r;
    r.rad = std::sqrt(alpha * log_t / n);
    r.rad_prime = std::sqrt(4.0 * log_t / n) + d1 * k / n + std::sqrt(12.0 * d2 * k * log_t / (n * n));
    return r;
}

DiagnosticRadius diagnostic_rad_prime(const ArsUcb& state, std::size_t arm, std::size_t t, double d1, double d2) {
    return diagnostic_rad_prime(state.alpha(), state.pulls(arm), state.next_round(arm),
                                std::log(static_cast<double>(t)), d1, d2);
}

}  // namespace banditlab

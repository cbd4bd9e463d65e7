#pragma once

#include <cstddef>
#include <cstdint>

#include "banditlab/ars_ucb.hpp"

namespace banditlab {

struct DiagnosticRadius {
    double rad = 0.0;        // sqrt(alpha log t / N_i), the radius ARS-UCB uses
    double rad_prime = 0.0;  // the delay-inflated radius from the regret analysis
};

// rad' = sqrt(4 log t / N) + d1 K / N + sqrt(12 d2 K log t / N^2)
DiagnosticRadius diagnostic_rad_prime(double alpha, std::uint64_t pulls, std::size_t rounds, double log_t,
                                      double d1, double d2);

// Uses N_i and K_i from a running ARS-UCB state. Requires N_i >= 1.
DiagnosticRadius diagnostic_rad_prime(const ArsUcb& state, std::size_t arm, std::size_t t, double d1, double d2);

}  // namespace banditlab

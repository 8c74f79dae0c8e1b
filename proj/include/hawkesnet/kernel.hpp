#ifndef HAWKESNET_KERNEL_HPP
#define HAWKESNET_KERNEL_HPP

#include <span>
#include <vector>

#include "hawkesnet/errors.hpp"

namespace hawkesnet {

// Exponentially decaying ground intensity mu + K * sum exp(-beta dt).
struct ground_params {
    double mu = 1.0;   // background rate, >= 0
    double K = 0.0;    // excitation weight, >= 0
    double beta = 1.0; // decay rate, > 0

    void validate() const;
    // K/beta < 1 is the subcritical regime; violation warns, not rejects.
    bool stable() const { return K < beta; }
};

// Event times closer than this are rejected as non-simple.
inline constexpr double min_event_gap = 1e-12;

// mu + K * sum_{t_i < t} exp(-beta (t - t_i)). Empty history gives mu.
double ground_intensity(double t, std::span<const double> event_times,
                        const ground_params& p);

// Integrated ground intensity over [0, T]:
// mu T + (K/beta) sum (1 - exp(-beta (T - t_i))).
double compensator(double T, std::span<const double> event_times,
                   const ground_params& p);

// A_i = sum_{j<i} exp(-beta (t_i - t_j)) via the O(n) recursion
// A_i = exp(-beta (t_i - t_{i-1})) (1 + A_{i-1}).
std::vector<double> excitation_sum_recursive(std::span<const double> event_times,
                                             double beta);

} // namespace hawkesnet

#endif

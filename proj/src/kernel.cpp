#include "hawkesnet/kernel.hpp"

#include <cmath>

namespace hawkesnet {

void ground_params::validate() const {
    if (!(mu >= 0.0)) throw error("mu must be >= 0");
    if (!(K >= 0.0)) throw error("K must be >= 0");
    if (!(beta > 0.0)) throw error("beta must be > 0");
}

double ground_intensity(double t, std::span<const double> event_times,
                        const ground_params& p) {
    double sum = 0.0;
    for (auto it = event_times.rbegin(); it != event_times.rend(); ++it) {
        if (*it >= t) continue;
        const double x = p.beta * (t - *it);
        if (x > 745.0) break; // older terms underflow to 0
        sum += std::exp(-x);
    }
    return p.mu + p.K * sum;
}

double compensator(double T, std::span<const double> event_times,
                   const ground_params& p) {
    double sum = 0.0;
    for (double ti : event_times) {
        if (ti > T)
            throw event_after_horizon_error("event time beyond horizon T");
        sum += 1.0 - std::exp(-p.beta * (T - ti));
    }
    return p.mu * T + (p.K / p.beta) * sum;
}

std::vector<double> excitation_sum_recursive(std::span<const double> event_times,
                                             double beta) {
    std::vector<double> a(event_times.size(), 0.0);
    for (std::size_t i = 1; i < event_times.size(); ++i) {
        const double dt = event_times[i] - event_times[i - 1];
        if (dt <= 0.0)
            throw unsorted_events_error("event times not strictly increasing");
        a[i] = std::exp(-beta * dt) * (1.0 + a[i - 1]);
    }
    return a;
}

} // namespace hawkesnet

#ifndef HAWKESNET_GOF_HPP
#define HAWKESNET_GOF_HPP

#include <cstdint>
#include <vector>

#include "hawkesnet/estimate.hpp"

namespace hawkesnet {

// Random-time-change residuals tau_i = Lambda(t_i). Under a correctly
// specified ground intensity the inter-arrivals are i.i.d. Exp(1). The
// transform integrates over the mark space, so it carries no information
// about mark-parameter fit.
struct residual_series {
    std::vector<double> transformed_times;
    std::vector<double> inter_arrivals;
    ground_params params;
};

residual_series rescale(const std::vector<double>& event_times, const ground_params& g);

struct ks_result {
    double statistic = 0.0;
    double p_value = 0.0;
    bool exact = false; // small-sample method used
};

// One-sample Kolmogorov-Smirnov against Exponential(rate). Exact
// distribution (Marsaglia-Tsang-Wang) below `exact_below` samples,
// asymptotic Kolmogorov tail otherwise. Needs >= 8 samples.
ks_result ks_test_exponential(std::vector<double> samples, double rate = 1.0,
                              std::size_t exact_below = 35);

// P(D_n < d) under the null, exactly.
double ks_cdf_exact(std::size_t n, double d);

// Parametric bootstrap p-value for the time-dimension fit: simulate from
// the fitted spec, refit ground parameters on each replicate (mark
// parameters held fixed for cost; full refits via full_refit), and rank
// the observed KS statistic. p = (1 + #{D_sim >= D_obs}) / (reps + 1).
struct bootstrap_result {
    double p_value = 0.0;
    double observed_statistic = 0.0;
    int reps_used = 0;
    int failures = 0;
};

bootstrap_result bootstrap_pvalue(const std::vector<event_record>& events,
                                  const model_spec& fitted, int reps, std::uint64_t seed,
                                  int jobs = 1, bool full_refit = false);

} // namespace hawkesnet

#endif

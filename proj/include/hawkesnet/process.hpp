#ifndef HAWKESNET_PROCESS_HPP
#define HAWKESNET_PROCESS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hawkesnet/kernel.hpp"
#include "hawkesnet/markmodel.hpp"

namespace hawkesnet {

// Full model: ground intensity, mark model, observation horizon, and the
// optional fraction of the horizon after which the new-node rate is
// forced to zero.
struct model_spec {
    ground_params ground;
    mark_model_spec mark;
    double horizon = 1.0;
    std::optional<double> node_rate_cutoff; // fraction of horizon in (0,1]

    void validate() const;
    // Effective lambda_nodes at time t (respects the cutoff).
    double lambda_nodes_at(double t) const;
};

struct realization {
    std::vector<event_record> events;
    node_aux_table aux;
    std::uint64_t seed = 0;
    model_spec spec;
    mark_diagnostics diag;
    bool truncated = false;        // explosion guard tripped
    bool stability_warning = false; // K/beta >= 1 at simulation time

    std::vector<double> event_times() const;
};

// Joint conditional intensity lambda(t, m | H_t) = q(m|t,H_t) *
// ground_intensity(t). Returns 0 for marks invalid against G_{t-}.
double joint_intensity(const model_spec& spec, const std::vector<event_record>& events_before,
                       double t, const mark& m);

// Ogata thinning (sequential). The dominating rate is the ground
// intensity just after the last considered point, valid because the
// exponential kernel is nonincreasing between events. Pure function of
// (spec, seed).
realization simulate(const model_spec& spec, std::uint64_t seed,
                     long max_events = 10000000L);

// mu / (1 - K/beta) for the exponential ground kernel; throws when
// K/beta >= 1.
double mean_intensity_estimate(const model_spec& spec);

struct branching_result {
    double value = 0.0;
    bool stable = false;
};

// Closed form K/beta for the exponential ground kernel.
branching_result branching_ratio(const model_spec& spec);

// --- Monte Carlo stability diagnostics -------------------------------------
//
// Diagnostic kernels factor as mark_factor(m, G) * time_part(s) with the
// mark factor piecewise constant between events, so the per-event
// expected-offspring integral is a finite sum of closed-form pieces.

class diagnostic_kernel {
public:
    virtual ~diagnostic_kernel() = default;
    virtual double mark_factor(const mark& m, const dynamic_network& net) const = 0;
    virtual double time_integral(double a, double b) const = 0; // integral of time part over [a,b]
    virtual std::string name() const = 0;
};

// alpha (1 + gamma * triangle count of the mark's edges) exp(-beta s).
// gamma = 0 reduces to the exponential kernel with ratio alpha/beta.
std::unique_ptr<diagnostic_kernel> make_exp_feedback_kernel(double alpha, double beta,
                                                            double gamma);

// (sum of mark-node degrees / N)^alpha (1 + s/c)^{-p}; non-integrable
// for p <= 1.
std::unique_ptr<diagnostic_kernel> make_powerlaw_degree_kernel(double alpha, double c,
                                                               double p);

// Registered names: "exp-feedback", "powerlaw-degree".
std::unique_ptr<diagnostic_kernel> make_diagnostic_kernel(const std::string& name,
                                                          const std::vector<double>& params);

struct branching_mc_result {
    double estimate = 0.0;
    double std_error = 0.0;
    bool sup_violation = false; // some event's expected offspring >= 1
    long events_evaluated = 0;
};

// Simulates `reps` histories from `base`, integrates the diagnostic
// kernel over [0, horizon] after each event along the realized history,
// and averages. A heuristic check, not a stationarity proof.
branching_mc_result estimate_branching_ratio_mc(const diagnostic_kernel& kernel,
                                                const model_spec& base, double horizon,
                                                int reps, std::uint64_t seed);

} // namespace hawkesnet

#endif

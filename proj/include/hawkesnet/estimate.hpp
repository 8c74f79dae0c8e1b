#ifndef HAWKESNET_ESTIMATE_HPP
#define HAWKESNET_ESTIMATE_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hawkesnet/process.hpp"

namespace hawkesnet {

struct fit_options {
    std::map<std::string, double> fixed;  // parameter name -> pinned value
    std::set<std::string> release;        // un-fix a default-fixed parameter (e.g. "nu")
    std::map<std::string, double> init;   // starting values for free parameters
    int max_evals = 4000;
    int restarts = 5;                     // random restarts beyond the first run
    std::uint64_t seed = 1;               // restart perturbations
    double window_start = 0.0;            // likelihood window is [window_start, T]
    // Search bound on a free beta, as a multiple of the mean event rate.
    // Decay faster than the inter-arrival spacing is informed only by
    // near-coincident event pairs, a degenerate spike mode of the
    // exponential-Hawkes likelihood. 0 disables the bound; explicitly
    // fixed values are never bounded.
    double beta_cap_scale = 4.0;
};

struct fit_result {
    std::map<std::string, double> estimates;   // free and fixed
    std::vector<std::string> free_names;       // canonical order
    std::map<std::string, double> std_errors;  // free parameters only
    std::string se_method;                     // "hessian" | "replication" | "hessian->replication"
    double loglik = 0.0;
    double ground_loglik = 0.0;
    double mark_loglik = 0.0;
    double aic = 0.0;
    bool converged = false;
    int iterations = 0; // objective evaluations, both blocks
    mark_diagnostics diag;

    model_spec fitted; // template with estimates substituted
};

struct likelihood_diagnostics {
    mark_diagnostics mark;
    bool zero_intensity_at_event = false;
};

// Exact log-likelihood: sum_i [log q(m_i|t_i,H) + log(mu + K A_i)] minus
// the closed-form compensator over [window_start, T]. Replays the network
// incrementally; O(n * cost(q)). aux supplies community/position for
// SBM/LS replays.
double log_likelihood(const std::vector<event_record>& events, const model_spec& spec,
                      double window_start = 0.0, const node_aux_table* aux = nullptr,
                      likelihood_diagnostics* diag = nullptr);

// Temporal block only: sum log(mu + K A_i) - compensator.
double ground_log_likelihood(const std::vector<double>& times, double T,
                             const ground_params& g, double window_start = 0.0);

// --- cached mark likelihood ---------------------------------------------
// Change statistics, pair decays and candidate indicators do not depend
// on the fitted parameters, so one replay of the data serves every
// objective evaluation.

class mark_likelihood_cache {
public:
    mark_likelihood_cache(const std::vector<event_record>& events, const model_spec& spec,
                          const node_aux_table* aux = nullptr);

    // Mark-block log-likelihood for the given parameters. theta must
    // match the spec's stats for CS (single coefficient for LS).
    double eval(double tau, double nu, double lambda_nodes,
                const std::vector<double>& theta, mark_diagnostics* diag = nullptr) const;

    mark_family family() const { return family_; }
    long events_with_nodes_allowed() const { return active_events_; }
    double mean_new_nodes() const; // moment estimate of lambda_nodes

private:
    mark_family family_;
    std::size_t n_stats_ = 0;
    std::vector<long> k_new_;
    std::vector<std::uint8_t> node_rate_active_;
    std::vector<std::size_t> row_begin_; // events.size() + 1
    long active_events_ = 0;

    // flat per-candidate rows
    std::vector<double> delta_t_;
    std::vector<std::uint8_t> selected_;
    std::vector<double> degree_;     // ba
    std::vector<double> change_;     // cs, n_stats_ per row
    std::vector<double> base_prob_;  // sbm: block matrix entry
    std::vector<double> distance_;   // ls
};

// Maximum-likelihood fit by Nelder-Mead over transformed coordinates
// (log for mu, K, beta, tau, lambda_nodes, nu; identity for theta). The
// ground and mark blocks of the likelihood are additively separable and
// are optimized independently; the reported loglik is their sum.
fit_result fit_mle(const std::vector<event_record>& events, const model_spec& family,
                   const fit_options& opts = {}, const node_aux_table* aux = nullptr);

// Ground-parameter fit only (used by gof and bootstrap refits). loglik
// in the result is the ground block.
fit_result fit_ground(const std::vector<double>& times, double T,
                      const fit_options& opts = {});

// method: "hessian" (inverse negative curvature at the MLE) or
// "replication" (sd across parametric-bootstrap refits). A singular
// Hessian falls back to replication and tags the result.
std::map<std::string, double> std_errors(const std::vector<event_record>& events,
                                         const model_spec& family, fit_result& fit,
                                         const std::string& method,
                                         const fit_options& opts = {},
                                         const node_aux_table* aux = nullptr,
                                         int replication_count = 30);

struct replication_row {
    std::string name;
    double truth = 0.0;
    double mean = 0.0;
    double sd = 0.0;
};

struct replication_summary {
    std::vector<replication_row> rows;
    int reps = 0;
    int failures = 0;
};

// Simulate -> fit `reps` times from the truth spec; per-replication rng
// streams are split from the master seed, so results are identical for
// any jobs count.
replication_summary replicate_experiment(const model_spec& truth, int reps,
                                         std::uint64_t master_seed,
                                         const fit_options& opts = {}, int jobs = 1);

// Named parameter access across both blocks: mu, K, beta, tau,
// lambda_nodes, nu, theta (ls) and the CS change-statistic names.
double get_param(const model_spec& spec, const std::string& name);
void set_param(model_spec& spec, const std::string& name, double v);

} // namespace hawkesnet

#endif

#ifndef HAWKESNET_MARKMODEL_HPP
#define HAWKESNET_MARKMODEL_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hawkesnet/dynet.hpp"
#include "hawkesnet/rng.hpp"

namespace hawkesnet {

enum class mark_family { ba, cs, sbm, ls };
enum class edge_scope { new_node_only, all_pairs };
enum class activity_mode { arrival, last_edge };

mark_family parse_mark_family(const std::string& s);
std::string to_string(mark_family f);

// Parameters of the mark probability mass function q(m | t, H_t).
//
// BA:  one new node per event, connected to old node i with probability
//      exp(-tau dt_i) d_i / sum_k exp(-tau dt_k) d_k (uniform when all
//      degrees are zero).
// CS:  Poisson(lambda_nodes) new nodes; candidate edge probability
//      (nu + exp(-tau dt)) * logistic(theta . change_stats).
// SBM: Poisson new nodes with communities ~ multinomial(block_probs);
//      p_i = exp(-tau dt_i) * block_matrix[x_i][x_new].
// LS:  Poisson new nodes placed in R^latent_dim; p_i = exp(-tau dt_i) *
//      logistic(theta0 * ||x_i - x_new||).
struct mark_model_spec {
    mark_family family = mark_family::ba;
    double tau = 0.0;                      // mark decay rate, >= 0
    std::vector<double> theta;             // cs: one per stat; ls: single coefficient
    std::vector<std::string> stats = {"edges", "triangles", "twostar", "threestar"};
    double nu = 0.0;                       // cs baseline edge weight, >= 0
    double lambda_nodes = 1.0;             // mean new nodes per event (cs/sbm/ls)
    std::vector<double> block_probs;       // sbm community weights, sums to 1
    std::vector<std::vector<double>> block_matrix; // sbm edge probabilities, symmetric
    int latent_dim = 2;
    double latent_scale = 1.0;             // sd of isotropic Gaussian placement
    edge_scope scope = edge_scope::new_node_only; // cs defaults to all_pairs
    activity_mode activity = activity_mode::arrival;

    void validate() const;
    static mark_model_spec defaults(mark_family f);
};

// Probabilities above 1 - eps are clamped; exact 1 makes the Bernoulli
// log-likelihood degenerate.
inline constexpr double prob_clamp_eps = 1e-12;

// Per-node auxiliary state: arrival and last-edge times plus the
// community label (SBM) or latent position (LS) sampled at birth.
class node_aux_table {
public:
    explicit node_aux_table(activity_mode mode = activity_mode::arrival, int latent_dim = 0)
        : mode_(mode), latent_dim_(latent_dim) {}

    std::size_t size() const { return arrival_.size(); }
    activity_mode mode() const { return mode_; }
    int latent_dim() const { return latent_dim_; }

    void add_node(double arrival, int community = -1, std::span<const double> position = {});
    // Refresh last-edge times of every endpoint in the mark.
    void note_edges(const mark& m, double t);

    double activity(node_id i) const {
        return mode_ == activity_mode::arrival ? arrival_.at(i) : last_edge_.at(i);
    }
    double arrival(node_id i) const { return arrival_.at(i); }
    int community(node_id i) const { return community_.at(i); }
    std::span<const double> position(node_id i) const;

    void set_community(node_id i, int c) { community_.at(i) = c; }
    void set_position(node_id i, std::span<const double> pos);

private:
    activity_mode mode_;
    int latent_dim_;
    std::vector<double> arrival_;
    std::vector<double> last_edge_;
    std::vector<int> community_;
    std::vector<double> position_; // flat, latent_dim_ per node
};

// Counts of probability clamps and zero-probability observed edges
// accumulated by evaluation and sampling.
struct mark_diagnostics {
    long clamp_events = 0;
    long zero_likelihood_edges = 0;
    void merge(const mark_diagnostics& o) {
        clamp_events += o.clamp_events;
        zero_likelihood_edges += o.zero_likelihood_edges;
    }
};

// --- per-family edge probabilities --------------------------------------
// All decay terms use exp(-tau dt); probabilities are clamped to
// [0, 1 - prob_clamp_eps] with clamps counted.

// One probability per existing node, normalized over nodes.
std::vector<double> ba_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                  double t, double tau);

struct cs_candidate {
    edge_t e;
    double delta_t = 0.0;          // t minus pair activity time
    std::vector<double> change;    // change statistics, one per spec.stats
    double prob = 0.0;
};

// Candidate pairs under the spec's edge scope; ids >= net.node_count()
// denote the pending new nodes (degree 0 for change statistics).
std::vector<edge_t> candidate_edges(const mark_model_spec& spec, const dynamic_network& net,
                                    std::size_t new_node_count);

std::vector<cs_candidate> cs_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                        double t, const mark_model_spec& spec,
                                        const std::vector<edge_t>& candidates,
                                        mark_diagnostics* diag = nullptr);

std::vector<double> sbm_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                   double t, const mark_model_spec& spec, int new_community,
                                   mark_diagnostics* diag = nullptr);

std::vector<double> ls_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                  double t, const mark_model_spec& spec,
                                  std::span<const double> new_position,
                                  mark_diagnostics* diag = nullptr);

// --- sampling and evaluation ---------------------------------------------

// Draws a mark at time t given network state G_{t-}. Extends aux with the
// new nodes (arrival t, sampled community/position). lambda_nodes_eff < 0
// means "use spec.lambda_nodes"; the process module passes 0 past the
// node-rate cutoff.
mark sample_mark(const mark_model_spec& spec, const dynamic_network& net,
                 node_aux_table& aux, double t, rng_t& rng,
                 double lambda_nodes_eff = -1.0, mark_diagnostics* diag = nullptr);

// log q(m | t, H_t). Requires aux records for m's new nodes (their
// community/position when the family needs them); BA/CS need nothing
// beyond the arrival time, which is t by definition. Returns -inf with
// the zero_likelihood_edges flag when an observed edge has probability 0.
double log_prob_mark(const mark_model_spec& spec, const dynamic_network& net,
                     const node_aux_table& aux, double t, const mark& m,
                     double lambda_nodes_eff = -1.0, mark_diagnostics* diag = nullptr);

// Validates m against net and applies it to both net and aux, sampling
// nothing: aux entries for new nodes default to (arrival t, no
// community, zero position) unless source_aux provides them.
void apply_event(dynamic_network& net, node_aux_table& aux, const event_record& ev,
                 const node_aux_table* source_aux = nullptr);

double log_poisson_pmf(long k, double mean);

// t minus the pair's activity time. Decay is driven by the staler
// endpoint, which reduces to the old endpoint for new-old pairs; pending
// new nodes (id >= aux size) count as active at t.
double pair_activity_delta(const node_aux_table& aux, edge_t e, double t);

inline double logistic(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

} // namespace hawkesnet

#endif

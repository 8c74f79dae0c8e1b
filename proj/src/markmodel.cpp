#include "hawkesnet/markmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hawkesnet {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

mark_family parse_mark_family(const std::string& s) {
    if (s == "ba") return mark_family::ba;
    if (s == "cs") return mark_family::cs;
    if (s == "sbm") return mark_family::sbm;
    if (s == "ls") return mark_family::ls;
    throw config_error("unknown mark model: " + s);
}

std::string to_string(mark_family f) {
    switch (f) {
        case mark_family::ba: return "ba";
        case mark_family::cs: return "cs";
        case mark_family::sbm: return "sbm";
        case mark_family::ls: return "ls";
    }
    return "?";
}

void mark_model_spec::validate() const {
    if (!(tau >= 0.0)) throw error("tau must be >= 0");
    if (!(nu >= 0.0)) throw error("nu must be >= 0");
    if (!(lambda_nodes >= 0.0)) throw error("lambda_nodes must be >= 0");
    if (family == mark_family::cs) {
        if (theta.size() != stats.size())
            throw error("cs theta must have one coefficient per change statistic");
        for (const auto& s : stats) lookup_change_stat(s);
    }
    if (family == mark_family::sbm) {
        if (block_probs.empty()) throw missing_community_error("sbm block_probs not set");
        double sum = 0.0;
        for (double c : block_probs) {
            if (c < 0.0) throw error("block_probs entries must be >= 0");
            sum += c;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw error("block_probs must sum to 1");
        const std::size_t r = block_probs.size();
        if (block_matrix.size() != r) throw error("block_matrix must be r x r");
        for (std::size_t i = 0; i < r; ++i) {
            if (block_matrix[i].size() != r) throw error("block_matrix must be r x r");
            for (std::size_t j = 0; j < r; ++j) {
                const double c = block_matrix[i][j];
                if (c < 0.0 || c > 1.0) throw error("block_matrix entries must be in [0,1]");
                if (std::fabs(c - block_matrix[j][i]) > 1e-12)
                    throw error("block_matrix must be symmetric");
            }
        }
    }
    if (family == mark_family::ls) {
        if (latent_dim < 1) throw error("latent_dim must be >= 1");
        if (!(latent_scale > 0.0)) throw error("latent_scale must be > 0");
        if (theta.empty()) throw error("ls needs one distance coefficient in theta");
    }
}

mark_model_spec mark_model_spec::defaults(mark_family f) {
    mark_model_spec spec;
    spec.family = f;
    switch (f) {
        case mark_family::ba:
            spec.tau = 0.5;
            break;
        case mark_family::cs:
            spec.scope = edge_scope::all_pairs;
            spec.tau = 0.5;
            spec.theta = {-6.0, 0.5, 0.3, -0.1};
            break;
        case mark_family::sbm:
            spec.tau = 0.5;
            spec.block_probs = {0.5, 0.5};
            spec.block_matrix = {{0.8, 0.1}, {0.1, 0.8}};
            break;
        case mark_family::ls:
            spec.tau = 0.5;
            spec.theta = {-1.0};
            break;
    }
    return spec;
}

// --- node_aux_table -------------------------------------------------------

void node_aux_table::add_node(double arrival, int community, std::span<const double> position) {
    arrival_.push_back(arrival);
    last_edge_.push_back(arrival);
    community_.push_back(community);
    if (latent_dim_ > 0) {
        if (!position.empty() && static_cast<int>(position.size()) != latent_dim_)
            throw missing_position_error("position dimension mismatch");
        for (int d = 0; d < latent_dim_; ++d)
            position_.push_back(position.empty() ? 0.0 : position[d]);
    }
}

void node_aux_table::note_edges(const mark& m, double t) {
    for (const edge_t& e : m.new_edges) {
        last_edge_.at(e.u) = t;
        last_edge_.at(e.v) = t;
    }
}

std::span<const double> node_aux_table::position(node_id i) const {
    if (latent_dim_ <= 0 || (i + 1) * static_cast<std::size_t>(latent_dim_) > position_.size())
        throw missing_position_error("node " + std::to_string(i) + " has no latent position");
    return {position_.data() + static_cast<std::size_t>(i) * latent_dim_,
            static_cast<std::size_t>(latent_dim_)};
}

void node_aux_table::set_position(node_id i, std::span<const double> pos) {
    if (static_cast<int>(pos.size()) != latent_dim_)
        throw missing_position_error("position dimension mismatch");
    std::copy(pos.begin(), pos.end(),
              position_.begin() + static_cast<std::size_t>(i) * latent_dim_);
}

// --- shared helpers --------------------------------------------------------

namespace {

// Pending new nodes (id >= aux size) have activity t by definition.
double node_activity(const node_aux_table& aux, node_id i, double t) {
    return i < aux.size() ? aux.activity(i) : t;
}

double clamp_prob(double p, mark_diagnostics* diag) {
    if (p > 1.0 - prob_clamp_eps) {
        if (diag) ++diag->clamp_events;
        return 1.0 - prob_clamp_eps;
    }
    return p < 0.0 ? 0.0 : p;
}

int community_of(const node_aux_table& aux, node_id i) {
    if (i >= aux.size() || aux.community(i) < 0)
        throw missing_community_error("node " + std::to_string(i) + " has no community label");
    return aux.community(i);
}

double latent_distance(const node_aux_table& aux, node_id a, node_id b) {
    const auto pa = aux.position(a);
    const auto pb = aux.position(b);
    double s = 0.0;
    for (std::size_t d = 0; d < pa.size(); ++d) {
        const double diff = pa[d] - pb[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

} // namespace

// --- per-family probabilities ----------------------------------------------

std::vector<double> ba_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                  double t, double tau) {
    const std::size_t n = net.node_count();
    if (n == 0) throw empty_network_error("ba_edge_probs on empty network");
    std::vector<double> w(n, 0.0);
    double total = 0.0;
    for (node_id i = 0; i < n; ++i) {
        w[i] = std::exp(-tau * (t - node_activity(aux, i, t))) *
               static_cast<double>(net.degree(i));
        total += w[i];
    }
    if (total <= 0.0) { // all degrees zero: uniform over nodes
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
        return w;
    }
    for (double& x : w) x /= total;
    return w;
}

std::vector<edge_t> candidate_edges(const mark_model_spec& spec, const dynamic_network& net,
                                    std::size_t new_node_count) {
    const node_id n = static_cast<node_id>(net.node_count());
    const node_id top = n + static_cast<node_id>(new_node_count);
    std::vector<edge_t> out;
    if (spec.scope == edge_scope::new_node_only) {
        out.reserve(static_cast<std::size_t>(n) * new_node_count);
        for (node_id v = n; v < top; ++v)
            for (node_id i = 0; i < n; ++i) out.emplace_back(i, v);
    } else {
        for (node_id i = 0; i < top; ++i)
            for (node_id j = i + 1; j < top; ++j)
                if (!net.has_edge(i, j)) out.emplace_back(i, j);
    }
    return out;
}

std::vector<cs_candidate> cs_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                        double t, const mark_model_spec& spec,
                                        const std::vector<edge_t>& candidates,
                                        mark_diagnostics* diag) {
    std::vector<change_stat_fn> fns;
    fns.reserve(spec.stats.size());
    for (const auto& s : spec.stats) fns.push_back(lookup_change_stat(s));

    std::vector<cs_candidate> out(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        cs_candidate& cand = out[c];
        cand.e = candidates[c];
        cand.delta_t = pair_activity_delta(aux, cand.e, t);
        cand.change.resize(fns.size());
        change_statistics_into(net, cand.e.u, cand.e.v, fns, cand.change.data());
        double lin = 0.0;
        for (std::size_t k = 0; k < fns.size(); ++k) lin += spec.theta[k] * cand.change[k];
        const double raw = (spec.nu + std::exp(-spec.tau * cand.delta_t)) * logistic(lin);
        cand.prob = clamp_prob(raw, diag);
    }
    return out;
}

std::vector<double> sbm_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                   double t, const mark_model_spec& spec, int new_community,
                                   mark_diagnostics* diag) {
    if (new_community < 0 || new_community >= static_cast<int>(spec.block_probs.size()))
        throw missing_community_error("new node community out of range");
    const std::size_t n = net.node_count();
    std::vector<double> p(n, 0.0);
    for (node_id i = 0; i < n; ++i) {
        const int ci = community_of(aux, i);
        const double decay = std::exp(-spec.tau * (t - node_activity(aux, i, t)));
        p[i] = clamp_prob(decay * spec.block_matrix[ci][new_community], diag);
    }
    return p;
}

std::vector<double> ls_edge_probs(const dynamic_network& net, const node_aux_table& aux,
                                  double t, const mark_model_spec& spec,
                                  std::span<const double> new_position,
                                  mark_diagnostics* diag) {
    const std::size_t n = net.node_count();
    std::vector<double> p(n, 0.0);
    for (node_id i = 0; i < n; ++i) {
        const auto pi = aux.position(i);
        double s = 0.0;
        for (std::size_t d = 0; d < pi.size(); ++d) {
            const double diff = pi[d] - new_position[d];
            s += diff * diff;
        }
        const double decay = std::exp(-spec.tau * (t - node_activity(aux, i, t)));
        p[i] = clamp_prob(decay * logistic(spec.theta[0] * std::sqrt(s)), diag);
    }
    return p;
}

// --- unified candidate probabilities ----------------------------------------

namespace {

struct candidate_prob {
    edge_t e;
    double p;
};

// Probabilities for every candidate edge, in candidate_edges order. New
// nodes (id >= net.node_count()) must already have aux records when the
// family needs community/position.
std::vector<candidate_prob> all_candidate_probs(const mark_model_spec& spec,
                                                const dynamic_network& net,
                                                const node_aux_table& aux, double t,
                                                std::size_t new_node_count,
                                                mark_diagnostics* diag) {
    const node_id n = static_cast<node_id>(net.node_count());
    std::vector<candidate_prob> out;

    if (spec.family == mark_family::ba) {
        if (n == 0) return out; // first node arrives alone
        const auto probs = ba_edge_probs(net, aux, t, spec.tau);
        out.reserve(n);
        for (node_id i = 0; i < n; ++i)
            out.push_back({edge_t(i, n), clamp_prob(probs[i], diag)});
        return out;
    }

    const auto cands = candidate_edges(spec, net, new_node_count);
    out.reserve(cands.size());

    switch (spec.family) {
        case mark_family::cs: {
            const auto cs = cs_edge_probs(net, aux, t, spec, cands, diag);
            for (const auto& c : cs) out.push_back({c.e, c.prob});
            break;
        }
        case mark_family::sbm: {
            for (const edge_t& e : cands) {
                const int cu = community_of(aux, e.u);
                const int cv = community_of(aux, e.v);
                const double decay = std::exp(-spec.tau * pair_activity_delta(aux, e, t));
                out.push_back({e, clamp_prob(decay * spec.block_matrix[cu][cv], diag)});
            }
            break;
        }
        case mark_family::ls: {
            for (const edge_t& e : cands) {
                const double decay = std::exp(-spec.tau * pair_activity_delta(aux, e, t));
                const double d = latent_distance(aux, e.u, e.v);
                out.push_back({e, clamp_prob(decay * logistic(spec.theta[0] * d), diag)});
            }
            break;
        }
        default:
            break;
    }
    return out;
}

} // namespace

// --- sampling ----------------------------------------------------------------

mark sample_mark(const mark_model_spec& spec, const dynamic_network& net,
                 node_aux_table& aux, double t, rng_t& rng, double lambda_nodes_eff,
                 mark_diagnostics* diag) {
    const node_id n = static_cast<node_id>(net.node_count());
    const double lambda =
        lambda_nodes_eff < 0.0 ? spec.lambda_nodes : lambda_nodes_eff;

    mark m;
    std::size_t k = 0;
    if (spec.family == mark_family::ba) {
        k = 1;
        aux.add_node(t);
    } else {
        k = static_cast<std::size_t>(poisson(rng, lambda));
        for (std::size_t j = 0; j < k; ++j) {
            int community = -1;
            std::vector<double> pos;
            if (spec.family == mark_family::sbm)
                community = static_cast<int>(discrete(rng, spec.block_probs));
            if (spec.family == mark_family::ls) {
                pos.resize(spec.latent_dim);
                for (double& x : pos) x = normal(rng, 0.0, spec.latent_scale);
            }
            aux.add_node(t, community, pos);
        }
    }
    m.new_nodes.resize(k);
    for (std::size_t j = 0; j < k; ++j) m.new_nodes[j] = n + static_cast<node_id>(j);

    for (const auto& cand : all_candidate_probs(spec, net, aux, t, k, diag))
        if (bernoulli(rng, cand.p)) m.new_edges.push_back(cand.e);
    return m;
}

// --- evaluation ----------------------------------------------------------------

double log_poisson_pmf(long k, double mean) {
    if (mean <= 0.0) return k == 0 ? 0.0 : neg_inf;
    return k * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0);
}

double pair_activity_delta(const node_aux_table& aux, edge_t e, double t) {
    const double a = node_activity(aux, e.u, t);
    const double b = node_activity(aux, e.v, t);
    return t - std::min(a, b);
}

double log_prob_mark(const mark_model_spec& spec, const dynamic_network& net,
                     const node_aux_table& aux, double t, const mark& m,
                     double lambda_nodes_eff, mark_diagnostics* diag) {
    const node_id n = static_cast<node_id>(net.node_count());
    const std::size_t k = m.new_nodes.size();

    // Structural validity against G_{t-}.
    {
        std::vector<node_id> nodes = m.new_nodes;
        std::sort(nodes.begin(), nodes.end());
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (nodes[j] != n + j)
                throw invalid_mark_error("mark's new nodes are not the next dense labels");
        std::set<edge_t> seen;
        for (const edge_t& e : m.new_edges) {
            if (e.u == e.v) throw invalid_mark_error("mark contains a self-loop");
            if (e.v >= n + k) throw invalid_mark_error("mark edge endpoint unknown");
            if (!seen.insert(e).second) throw invalid_mark_error("mark repeats an edge");
            if (net.has_edge(e.u, e.v))
                throw invalid_mark_error("mark duplicates an existing edge");
        }
    }

    double lp = 0.0;
    if (spec.family == mark_family::ba) {
        if (k != 1) return neg_inf; // BA adds exactly one node
    } else {
        const double lambda =
            lambda_nodes_eff < 0.0 ? spec.lambda_nodes : lambda_nodes_eff;
        lp += log_poisson_pmf(static_cast<long>(k), lambda);
        if (lp == neg_inf) return neg_inf;
    }

    std::set<edge_t> observed(m.new_edges.begin(), m.new_edges.end());
    std::size_t matched = 0;
    for (const auto& cand : all_candidate_probs(spec, net, aux, t, k, diag)) {
        const bool e = observed.count(cand.e) > 0;
        if (e) {
            ++matched;
            if (cand.p <= 0.0) {
                if (diag) ++diag->zero_likelihood_edges;
                return neg_inf;
            }
            lp += std::log(cand.p);
        } else {
            lp += std::log1p(-cand.p);
        }
    }
    if (matched != observed.size()) {
        // Observed edge outside the candidate set has probability zero.
        if (diag) ++diag->zero_likelihood_edges;
        return neg_inf;
    }
    return lp;
}

void apply_event(dynamic_network& net, node_aux_table& aux, const event_record& ev,
                 const node_aux_table* source_aux) {
    std::vector<node_id> ordered = ev.m.new_nodes;
    std::sort(ordered.begin(), ordered.end());
    for (node_id v : ordered) {
        if (v < aux.size()) continue; // already extended by the sampler
        if (source_aux && v < source_aux->size()) {
            std::vector<double> pos;
            if (aux.latent_dim() > 0) {
                auto p = source_aux->position(v);
                pos.assign(p.begin(), p.end());
            }
            aux.add_node(ev.time, source_aux->community(v), pos);
        } else {
            aux.add_node(ev.time);
        }
    }
    net.apply_mark(ev.time, ev.m);
    aux.note_edges(ev.m, ev.time);
}

} // namespace hawkesnet

#include "hawkesnet/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "hawkesnet/optimize.hpp"

namespace hawkesnet {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

// --- parameter plumbing -----------------------------------------------------

namespace {

struct param_def {
    std::string name;
    bool log_transform = true;
    bool ground = false;
    bool fixed_by_default = false;
    double default_fixed_value = 0.0;
};

std::vector<param_def> parameter_table(const model_spec& spec) {
    std::vector<param_def> defs = {
        {"mu", true, true},
        {"K", true, true},
        {"beta", true, true},
    };
    switch (spec.mark.family) {
        case mark_family::ba:
            defs.push_back({"tau", true});
            break;
        case mark_family::cs:
            defs.push_back({"tau", true});
            defs.push_back({"lambda_nodes", true});
            defs.push_back({"nu", true, false, true, 0.0});
            for (const auto& s : spec.mark.stats) defs.push_back({s, false});
            break;
        case mark_family::sbm:
            defs.push_back({"tau", true});
            defs.push_back({"lambda_nodes", true});
            break;
        case mark_family::ls:
            defs.push_back({"theta", false});
            defs.push_back({"tau", true});
            defs.push_back({"lambda_nodes", true});
            break;
    }
    return defs;
}

std::size_t stat_index(const model_spec& spec, const std::string& name) {
    for (std::size_t i = 0; i < spec.mark.stats.size(); ++i)
        if (spec.mark.stats[i] == name) return i;
    throw error("unknown parameter: " + name);
}

void set_param_ground(ground_params& g, const std::string& name, double v) {
    if (name == "mu") g.mu = v;
    else if (name == "K") g.K = v;
    else if (name == "beta") g.beta = v;
    else throw error("not a ground parameter: " + name);
}

double get_param_ground(const ground_params& g, const std::string& name) {
    if (name == "mu") return g.mu;
    if (name == "K") return g.K;
    if (name == "beta") return g.beta;
    throw error("not a ground parameter: " + name);
}

} // namespace

double get_param(const model_spec& spec, const std::string& name) {
    if (name == "mu") return spec.ground.mu;
    if (name == "K") return spec.ground.K;
    if (name == "beta") return spec.ground.beta;
    if (name == "tau") return spec.mark.tau;
    if (name == "lambda_nodes") return spec.mark.lambda_nodes;
    if (name == "nu") return spec.mark.nu;
    if (name == "theta") return spec.mark.theta.at(0);
    return spec.mark.theta.at(stat_index(spec, name));
}

void set_param(model_spec& spec, const std::string& name, double v) {
    if (name == "mu") { spec.ground.mu = v; return; }
    if (name == "K") { spec.ground.K = v; return; }
    if (name == "beta") { spec.ground.beta = v; return; }
    if (name == "tau") { spec.mark.tau = v; return; }
    if (name == "lambda_nodes") { spec.mark.lambda_nodes = v; return; }
    if (name == "nu") { spec.mark.nu = v; return; }
    if (name == "theta") {
        if (spec.mark.theta.empty()) spec.mark.theta.resize(1);
        spec.mark.theta.at(0) = v;
        return;
    }
    spec.mark.theta.at(stat_index(spec, name)) = v;
}

// --- likelihood --------------------------------------------------------------

double ground_log_likelihood(const std::vector<double>& times, double T,
                             const ground_params& g, double window_start) {
    const auto a = excitation_sum_recursive(times, g.beta);
    double ll = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double rate = g.mu + g.K * a[i];
        if (rate <= 0.0) return neg_inf; // mu = K = 0 with events present
        ll += std::log(rate);
    }
    return ll - (compensator(T, times, g) - g.mu * window_start);
}

double log_likelihood(const std::vector<event_record>& events, const model_spec& spec,
                      double window_start, const node_aux_table* aux,
                      likelihood_diagnostics* diag) {
    dynamic_network net;
    node_aux_table replay_aux(spec.mark.activity, spec.mark.latent_dim);
    std::vector<double> times;
    times.reserve(events.size());

    double mark_ll = 0.0;
    for (const auto& ev : events) {
        for (node_id v : ev.m.new_nodes) { // extend before evaluating q
            if (v < replay_aux.size()) continue;
            if (aux && v < aux->size()) {
                std::vector<double> pos;
                if (replay_aux.latent_dim() > 0) {
                    auto p = aux->position(v);
                    pos.assign(p.begin(), p.end());
                }
                replay_aux.add_node(ev.time, aux->community(v), pos);
            } else {
                replay_aux.add_node(ev.time);
            }
        }
        mark_ll += log_prob_mark(spec.mark, net, replay_aux, ev.time, ev.m,
                                 spec.lambda_nodes_at(ev.time),
                                 diag ? &diag->mark : nullptr);
        net.apply_mark(ev.time, ev.m);
        replay_aux.note_edges(ev.m, ev.time);
        times.push_back(ev.time);
    }

    const double ground_ll =
        ground_log_likelihood(times, spec.horizon, spec.ground, window_start);
    if (diag && ground_ll == neg_inf) diag->zero_intensity_at_event = true;
    return mark_ll + ground_ll;
}

// --- cached mark likelihood ----------------------------------------------------

mark_likelihood_cache::mark_likelihood_cache(const std::vector<event_record>& events,
                                             const model_spec& spec,
                                             const node_aux_table* aux) {
    family_ = spec.mark.family;
    n_stats_ = spec.mark.stats.size();
    std::vector<change_stat_fn> fns;
    if (family_ == mark_family::cs)
        for (const auto& s : spec.mark.stats) fns.push_back(lookup_change_stat(s));

    dynamic_network net;
    node_aux_table replay_aux(spec.mark.activity, spec.mark.latent_dim);
    row_begin_.push_back(0);

    for (const auto& ev : events) {
        const double t = ev.time;
        const std::size_t k = ev.m.new_nodes.size();
        const bool active =
            !spec.node_rate_cutoff || t <= *spec.node_rate_cutoff * spec.horizon;
        if (!active && k > 0)
            throw error("node_rate_cutoff is earlier than a node addition at t=" +
                        std::to_string(t));
        if (family_ == mark_family::ba && k != 1)
            throw error("ba family requires exactly one new node per event (t=" +
                        std::to_string(t) + " adds " + std::to_string(k) + ")");
        k_new_.push_back(static_cast<long>(k));
        node_rate_active_.push_back(active ? 1 : 0);
        if (active) ++active_events_;

        std::vector<node_id> ordered = ev.m.new_nodes;
        std::sort(ordered.begin(), ordered.end());
        for (node_id v : ordered) {
            if (v < replay_aux.size()) continue;
            if (aux && v < aux->size()) {
                std::vector<double> pos;
                if (replay_aux.latent_dim() > 0) {
                    auto p = aux->position(v);
                    pos.assign(p.begin(), p.end());
                }
                replay_aux.add_node(t, aux->community(v), pos);
            } else {
                replay_aux.add_node(t);
            }
        }

        std::set<edge_t> observed(ev.m.new_edges.begin(), ev.m.new_edges.end());
        std::size_t matched = 0;

        if (family_ == mark_family::ba) {
            const node_id n = static_cast<node_id>(net.node_count());
            for (node_id i = 0; i < n; ++i) {
                delta_t_.push_back(t - replay_aux.activity(i));
                degree_.push_back(static_cast<double>(net.degree(i)));
                const bool sel = observed.count(edge_t(i, n)) > 0;
                selected_.push_back(sel ? 1 : 0);
                if (sel) ++matched;
            }
        } else {
            const auto cands = candidate_edges(spec.mark, net, k);
            for (const edge_t& e : cands) {
                delta_t_.push_back(pair_activity_delta(replay_aux, e, t));
                const bool sel = observed.count(e) > 0;
                selected_.push_back(sel ? 1 : 0);
                if (sel) ++matched;
                switch (family_) {
                    case mark_family::cs: {
                        const std::size_t at = change_.size();
                        change_.resize(at + n_stats_);
                        change_statistics_into(net, e.u, e.v, fns, change_.data() + at);
                        break;
                    }
                    case mark_family::sbm: {
                        const int cu = replay_aux.community(e.u);
                        const int cv = replay_aux.community(e.v);
                        if (cu < 0 || cv < 0)
                            throw missing_community_error(
                                "sbm replay needs community labels for all nodes");
                        base_prob_.push_back(spec.mark.block_matrix[cu][cv]);
                        break;
                    }
                    case mark_family::ls: {
                        const auto pu = replay_aux.position(e.u);
                        const auto pv = replay_aux.position(e.v);
                        double s = 0.0;
                        for (std::size_t d = 0; d < pu.size(); ++d)
                            s += (pu[d] - pv[d]) * (pu[d] - pv[d]);
                        distance_.push_back(std::sqrt(s));
                        break;
                    }
                    default:
                        break;
                }
            }
        }
        if (matched != observed.size())
            throw error("observed edge outside the model's candidate set at t=" +
                        std::to_string(t) + "; check edge_scope");
        row_begin_.push_back(selected_.size());

        net.apply_mark(t, ev.m);
        replay_aux.note_edges(ev.m, t);
    }
}

double mark_likelihood_cache::mean_new_nodes() const {
    if (active_events_ == 0) return 0.0;
    long sum = 0;
    for (std::size_t i = 0; i < k_new_.size(); ++i)
        if (node_rate_active_[i]) sum += k_new_[i];
    return static_cast<double>(sum) / static_cast<double>(active_events_);
}

double mark_likelihood_cache::eval(double tau, double nu, double lambda_nodes,
                                   const std::vector<double>& theta,
                                   mark_diagnostics* diag) const {
    const std::size_t n_events = k_new_.size();
    double ll = 0.0;

    if (family_ != mark_family::ba) {
        for (std::size_t i = 0; i < n_events; ++i) {
            ll += log_poisson_pmf(k_new_[i], node_rate_active_[i] ? lambda_nodes : 0.0);
            if (ll == neg_inf) return neg_inf;
        }
    }

    const double cap = 1.0 - prob_clamp_eps;
    auto bernoulli_term = [&](double p, bool sel) {
        if (p > cap) {
            if (diag) ++diag->clamp_events;
            p = cap;
        }
        if (sel) {
            if (p <= 0.0) {
                if (diag) ++diag->zero_likelihood_edges;
                return neg_inf;
            }
            return std::log(p);
        }
        return std::log1p(-p);
    };

    for (std::size_t i = 0; i < n_events; ++i) {
        const std::size_t lo = row_begin_[i];
        const std::size_t hi = row_begin_[i + 1];
        switch (family_) {
            case mark_family::ba: {
                double total = 0.0;
                for (std::size_t r = lo; r < hi; ++r)
                    total += std::exp(-tau * delta_t_[r]) * degree_[r];
                const double n_old = static_cast<double>(hi - lo);
                for (std::size_t r = lo; r < hi; ++r) {
                    const double p = total > 0.0
                        ? std::exp(-tau * delta_t_[r]) * degree_[r] / total
                        : 1.0 / n_old;
                    ll += bernoulli_term(p, selected_[r] != 0);
                    if (ll == neg_inf) return neg_inf;
                }
                break;
            }
            case mark_family::cs: {
                for (std::size_t r = lo; r < hi; ++r) {
                    double lin = 0.0;
                    const double* c = change_.data() + r * n_stats_;
                    for (std::size_t s = 0; s < n_stats_; ++s) lin += theta[s] * c[s];
                    const double p = (nu + std::exp(-tau * delta_t_[r])) * logistic(lin);
                    ll += bernoulli_term(p, selected_[r] != 0);
                    if (ll == neg_inf) return neg_inf;
                }
                break;
            }
            case mark_family::sbm: {
                for (std::size_t r = lo; r < hi; ++r) {
                    const double p = std::exp(-tau * delta_t_[r]) * base_prob_[r];
                    ll += bernoulli_term(p, selected_[r] != 0);
                    if (ll == neg_inf) return neg_inf;
                }
                break;
            }
            case mark_family::ls: {
                for (std::size_t r = lo; r < hi; ++r) {
                    const double p =
                        std::exp(-tau * delta_t_[r]) * logistic(theta[0] * distance_[r]);
                    ll += bernoulli_term(p, selected_[r] != 0);
                    if (ll == neg_inf) return neg_inf;
                }
                break;
            }
        }
    }
    return ll;
}

// --- fitting ---------------------------------------------------------------------

namespace {

struct free_param {
    param_def def;
    double init = 0.0;
};

double to_internal(const param_def& def, double x) {
    if (!def.log_transform) return x;
    return std::log(std::max(x, 1e-8));
}

double from_internal(const param_def& def, double y) {
    return def.log_transform ? std::exp(y) : y;
}

// Multi-start Nelder-Mead in transformed coordinates.
nm_result optimize_block(const objective_fn& f_internal, const std::vector<double>& y0,
                         const fit_options& opts, std::uint64_t stream) {
    nm_options nm;
    nm.max_evals = opts.max_evals;
    nm_result best = nelder_mead(f_internal, y0, nm);
    rng_t rng = split_stream(opts.seed, stream);
    for (int r = 0; r < opts.restarts; ++r) {
        std::vector<double> y = y0;
        for (double& v : y) v += normal(rng, 0.0, 0.35);
        try {
            const nm_result cand = nelder_mead(f_internal, y, nm);
            best.evals += cand.evals;
            if (cand.fmin < best.fmin) {
                const int evals = best.evals;
                best = cand;
                best.evals = evals;
            }
        } catch (const nonfinite_likelihood_error&) {
            // a perturbed start can land outside the finite region; skip it
        }
    }
    return best;
}

// The (K, beta) surface is flat with a spiky large-beta mode that can trap
// the simplex. Profile a logarithmic beta grid with short (mu, K) searches
// and start the full optimization from the best grid point.
struct ground_fit_outcome {
    ground_params params;
    std::map<std::string, double> estimates; // free and fixed
    std::vector<std::string> free_names;
    double loglik = 0.0;
    int evals = 0;
    bool converged = false;
};

ground_fit_outcome optimize_ground_block(const std::vector<double>& times, double T,
                                         const fit_options& opts) {
    const double rate = static_cast<double>(times.size()) / (T - opts.window_start);
    const std::vector<param_def> defs = {
        {"mu", true, true}, {"K", true, true}, {"beta", true, true}};

    ground_fit_outcome out;
    ground_params base{0.7 * rate, 0.3 * rate, rate};
    std::vector<param_def> free;
    for (const auto& def : defs) {
        auto fx = opts.fixed.find(def.name);
        if (fx != opts.fixed.end()) {
            out.estimates[def.name] = fx->second;
            set_param_ground(base, def.name, fx->second);
            continue;
        }
        free.push_back(def);
    }

    bool beta_is_free = false;
    for (const auto& def : free) beta_is_free |= def.name == "beta";
    const double beta_cap = (beta_is_free && opts.beta_cap_scale > 0.0)
                                ? opts.beta_cap_scale * rate
                                : std::numeric_limits<double>::infinity();

    auto unpack = [&](const std::vector<double>& y) {
        ground_params g = base;
        for (std::size_t i = 0; i < free.size(); ++i)
            set_param_ground(g, free[i].name, from_internal(free[i], y[i]));
        return g;
    };
    auto eval = [&](const std::vector<double>& y) {
        const ground_params g = unpack(y);
        if (g.beta > beta_cap) return std::numeric_limits<double>::infinity();
        return -ground_log_likelihood(times, T, g, opts.window_start);
    };

    std::vector<double> y0;
    bool beta_free = false;
    for (const auto& def : free) {
        double v;
        auto in = opts.init.find(def.name);
        if (in != opts.init.end()) v = in->second;
        else if (def.name == "mu") v = 0.7 * rate;
        else if (def.name == "K") v = 0.3 * rate;
        else { v = rate; beta_free = true; }
        y0.push_back(to_internal(def, v));
    }

    if (beta_free && !opts.init.count("beta") && times.size() >= 2) {
        double best_f = eval(y0);
        std::vector<double> best_y = y0;
        nm_options short_nm;
        short_nm.max_evals = 200;
        short_nm.diameter_tol = 1e-5;
        for (double scale : {1.0 / 64, 1.0 / 16, 0.25, 1.0, 4.0, 16.0}) {
            const double beta_g = rate * scale;
            if (beta_g > beta_cap) continue;
            std::vector<double> y = y0;
            std::vector<std::size_t> inner_idx;
            for (std::size_t i = 0; i < free.size(); ++i) {
                if (free[i].name == "beta") y[i] = std::log(beta_g);
                else if (free[i].name == "K") y[i] = std::log(std::max(0.3 * beta_g, 1e-8));
                if (free[i].name != "beta") inner_idx.push_back(i);
            }
            auto inner = [&](const std::vector<double>& yi) {
                std::vector<double> full = y;
                for (std::size_t k = 0; k < inner_idx.size(); ++k) full[inner_idx[k]] = yi[k];
                return eval(full);
            };
            std::vector<double> yi0;
            for (std::size_t idx : inner_idx) yi0.push_back(y[idx]);
            try {
                const nm_result pr = nelder_mead(inner, yi0, short_nm);
                out.evals += pr.evals;
                for (std::size_t k = 0; k < inner_idx.size(); ++k) y[inner_idx[k]] = pr.x[k];
                const double f = eval(y);
                if (f < best_f) {
                    best_f = f;
                    best_y = y;
                }
            } catch (const nonfinite_likelihood_error&) {
            }
        }
        y0 = best_y;
    }

    const nm_result r = optimize_block(eval, y0, opts, 101);
    out.params = unpack(r.x);
    for (const auto& def : free) {
        const double v = get_param_ground(out.params, def.name);
        out.estimates[def.name] = v;
        out.free_names.push_back(def.name);
    }
    out.loglik = -r.fmin;
    out.evals += r.evals;
    out.converged = r.converged;
    return out;
}

} // namespace

fit_result fit_mle(const std::vector<event_record>& events, const model_spec& family,
                   const fit_options& opts, const node_aux_table* aux) {
    if (events.size() < 2) throw error("fit requires at least 2 events");
    family.mark.validate();

    const double T = family.horizon;
    std::vector<double> times;
    times.reserve(events.size());
    for (const auto& ev : events) times.push_back(ev.time);

    mark_likelihood_cache cache(events, family, aux);

    // Partition mark parameters into fixed and free, with data-driven
    // inits; the ground block handles its own split.
    const auto defs = parameter_table(family);
    std::map<std::string, double> fixed;
    std::vector<free_param> mark_free;
    const double mean_k = cache.mean_new_nodes();
    int ground_fixed = 0;

    for (const auto& def : defs) {
        auto fx = opts.fixed.find(def.name);
        if (fx != opts.fixed.end()) {
            fixed[def.name] = fx->second;
            if (def.ground) ++ground_fixed;
            continue;
        }
        if (def.ground) continue;
        if (def.fixed_by_default && !opts.release.count(def.name) &&
            !opts.init.count(def.name)) {
            fixed[def.name] = def.default_fixed_value;
            continue;
        }
        // lambda_nodes has MLE 0 when no event adds nodes; pin it there.
        if (def.name == "lambda_nodes" && mean_k == 0.0 && !opts.init.count(def.name)) {
            fixed[def.name] = 0.0;
            continue;
        }
        free_param p{def, 0.0};
        auto in = opts.init.find(def.name);
        if (in != opts.init.end()) {
            p.init = in->second;
        } else if (def.name == "tau") {
            p.init = 1.0;
        } else if (def.name == "lambda_nodes") {
            p.init = std::max(mean_k, 1e-3);
        } else if (def.name == "nu") {
            p.init = 0.01;
        } else if (def.name == "edges") {
            p.init = -2.0;
        } else if (def.name == "theta") {
            p.init = -1.0;
        } else {
            p.init = 0.0;
        }
        mark_free.push_back(std::move(p));
    }
    if (ground_fixed == 3 && mark_free.empty())
        throw error("fit requires at least one free parameter");

    fit_result out;
    out.fitted = family;
    for (const auto& [name, v] : fixed) {
        out.estimates[name] = v;
        set_param(out.fitted, name, v);
    }

    // Ground block.
    const ground_fit_outcome ground_fit = optimize_ground_block(times, T, opts);
    for (const auto& name : ground_fit.free_names) {
        out.estimates[name] = ground_fit.estimates.at(name);
        set_param(out.fitted, name, ground_fit.estimates.at(name));
    }
    out.ground_loglik = ground_fit.loglik;
    out.iterations += ground_fit.evals;
    out.converged = ground_fit.converged;

    // Mark block.
    {
        auto assemble = [&](const std::vector<double>& y, double& tau, double& nu,
                            double& lambda, std::vector<double>& theta) {
            tau = out.fitted.mark.tau;
            nu = out.fitted.mark.nu;
            lambda = out.fitted.mark.lambda_nodes;
            theta = out.fitted.mark.theta;
            for (std::size_t i = 0; i < mark_free.size(); ++i) {
                const auto& def = mark_free[i].def;
                const double v = from_internal(def, y[i]);
                if (def.name == "tau") tau = v;
                else if (def.name == "nu") nu = v;
                else if (def.name == "lambda_nodes") lambda = v;
                else if (def.name == "theta") theta.at(0) = v;
                else theta.at(stat_index(family, def.name)) = v;
            }
        };
        auto eval = [&](const std::vector<double>& y) {
            double tau, nu, lambda;
            std::vector<double> theta;
            assemble(y, tau, nu, lambda, theta);
            return -cache.eval(tau, nu, lambda, theta);
        };
        std::vector<double> y0;
        for (const auto& p : mark_free) y0.push_back(to_internal(p.def, p.init));
        const nm_result r = optimize_block(eval, y0, opts, 202);
        double tau, nu, lambda;
        std::vector<double> theta;
        assemble(r.x, tau, nu, lambda, theta);
        out.fitted.mark.tau = tau;
        out.fitted.mark.nu = nu;
        out.fitted.mark.lambda_nodes = lambda;
        out.fitted.mark.theta = theta;
        for (const auto& p : mark_free)
            out.estimates[p.def.name] = get_param(out.fitted, p.def.name);
        out.mark_loglik = cache.eval(tau, nu, lambda, theta, &out.diag);
        out.iterations += r.evals;
        out.converged = out.converged && r.converged;
    }

    for (const auto& name : ground_fit.free_names) out.free_names.push_back(name);
    for (const auto& p : mark_free) out.free_names.push_back(p.def.name);
    out.loglik = out.ground_loglik + out.mark_loglik;
    out.aic = 2.0 * static_cast<double>(out.free_names.size()) - 2.0 * out.loglik;
    return out;
}

fit_result fit_ground(const std::vector<double>& times, double T, const fit_options& opts) {
    if (times.size() < 2) throw error("fit requires at least 2 events");
    const ground_fit_outcome g = optimize_ground_block(times, T, opts);
    fit_result out;
    out.fitted.horizon = T;
    out.fitted.ground = g.params;
    out.estimates = g.estimates;
    out.free_names = g.free_names;
    out.ground_loglik = g.loglik;
    out.loglik = g.loglik;
    out.aic = 2.0 * static_cast<double>(out.free_names.size()) - 2.0 * out.loglik;
    out.converged = g.converged;
    out.iterations = g.evals;
    return out;
}

// --- standard errors -----------------------------------------------------------

std::map<std::string, double> std_errors(const std::vector<event_record>& events,
                                         const model_spec& family, fit_result& fit,
                                         const std::string& method, const fit_options& opts,
                                         const node_aux_table* aux, int replication_count) {
    if (!fit.converged) throw error("std_errors requires a converged fit");
    std::map<std::string, double> se;

    if (method == "hessian") {
        std::vector<double> x;
        std::vector<double> steps;
        std::vector<bool> positive;
        const auto defs = parameter_table(family);
        for (const auto& name : fit.free_names) {
            const double v = fit.estimates.at(name);
            bool log_tr = true;
            for (const auto& d : defs)
                if (d.name == name) log_tr = d.log_transform;
            x.push_back(v);
            positive.push_back(log_tr);
            double h = std::max(1e-4 * std::fabs(v), 1e-6);
            if (log_tr && v > 0.0) h = std::min(h, v / 2.0);
            steps.push_back(h);
        }
        mark_likelihood_cache cache(events, family, aux);
        std::vector<double> times;
        for (const auto& ev : events) times.push_back(ev.time);

        auto neg_ll = [&](const std::vector<double>& xv) {
            model_spec m = fit.fitted;
            for (std::size_t i = 0; i < xv.size(); ++i) {
                if (positive[i] && xv[i] <= 0.0)
                    return std::numeric_limits<double>::infinity();
                set_param(m, fit.free_names[i], xv[i]);
            }
            const double g =
                ground_log_likelihood(times, family.horizon, m.ground, opts.window_start);
            const double q =
                cache.eval(m.mark.tau, m.mark.nu, m.mark.lambda_nodes, m.mark.theta);
            return -(g + q);
        };
        try {
            const auto hess = numeric_hessian(neg_ll, x, steps);
            const auto cov = invert_matrix(hess);
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!(cov[i][i] > 0.0))
                    throw singular_hessian_error("non-positive variance estimate");
                se[fit.free_names[i]] = std::sqrt(cov[i][i]);
            }
            fit.se_method = "hessian";
            fit.std_errors = se;
            return se;
        } catch (const singular_hessian_error&) {
            se = std_errors(events, family, fit, "replication", opts, aux, replication_count);
            fit.se_method = "hessian->replication";
            return se;
        }
    }

    if (method != "replication")
        throw error("unknown std_errors method: " + method);

    // Parametric bootstrap: simulate from the fitted model and refit. A
    // near-critical fitted model must not stall the refits.
    const long event_cap =
        std::max<long>(100000, 100 * static_cast<long>(events.size()));
    std::map<std::string, std::vector<double>> draws;
    int failures = 0;
    for (int b = 0; b < replication_count; ++b) {
        rng_t rng = split_stream(opts.seed ^ 0x5eb007u, static_cast<std::uint64_t>(b));
        try {
            const realization sim = simulate(fit.fitted, rng(), event_cap);
            if (sim.truncated || sim.events.size() < 2) { ++failures; continue; }
            fit_options ropts = opts;
            ropts.restarts = std::min(opts.restarts, 2);
            const fit_result rf = fit_mle(sim.events, family, ropts, &sim.aux);
            for (const auto& name : fit.free_names)
                draws[name].push_back(rf.estimates.at(name));
        } catch (const error&) {
            ++failures;
        }
    }
    for (const auto& name : fit.free_names) {
        const auto& v = draws[name];
        if (v.size() < 2) { se[name] = 0.0; continue; }
        double mean = 0.0;
        for (double d : v) mean += d;
        mean /= v.size();
        double var = 0.0;
        for (double d : v) var += (d - mean) * (d - mean);
        se[name] = std::sqrt(var / (v.size() - 1.0));
    }
    fit.se_method = "replication";
    fit.std_errors = se;
    return se;
}

// --- replication study -----------------------------------------------------------

replication_summary replicate_experiment(const model_spec& truth, int reps,
                                         std::uint64_t master_seed, const fit_options& opts,
                                         int jobs) {
    if (reps < 2) throw error("replicate_experiment requires reps >= 2");
    truth.validate();

    // Free parameter names under these options, in canonical order.
    std::vector<std::string> names;
    for (const auto& def : parameter_table(truth)) {
        if (opts.fixed.count(def.name)) continue;
        if (def.fixed_by_default && !opts.release.count(def.name) &&
            !opts.init.count(def.name))
            continue;
        names.push_back(def.name);
    }

    std::vector<std::map<std::string, double>> results(reps);
    std::vector<std::uint8_t> ok(reps, 0);

    auto worker = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            rng_t stream = split_stream(master_seed, static_cast<std::uint64_t>(r));
            try {
                const realization sim = simulate(truth, stream());
                if (sim.events.size() < 2) continue;
                const fit_result fr = fit_mle(sim.events, truth, opts, &sim.aux);
                results[r] = fr.estimates;
                ok[r] = 1;
            } catch (const error&) {
                // recorded as a failure below
            }
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker(0, reps);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (reps + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            const int b = j * chunk;
            const int e = std::min(reps, b + chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    replication_summary out;
    out.reps = reps;
    for (int r = 0; r < reps; ++r)
        if (!ok[r]) ++out.failures;

    for (const auto& name : names) {
        replication_row row;
        row.name = name;
        row.truth = get_param(truth, name);
        std::vector<double> v;
        for (int r = 0; r < reps; ++r)
            if (ok[r]) v.push_back(results[r].at(name));
        if (!v.empty()) {
            double mean = 0.0;
            for (double d : v) mean += d;
            mean /= v.size();
            double var = 0.0;
            for (double d : v) var += (d - mean) * (d - mean);
            row.mean = mean;
            row.sd = v.size() > 1 ? std::sqrt(var / (v.size() - 1.0)) : 0.0;
        }
        out.rows.push_back(row);
    }
    return out;
}

} // namespace hawkesnet

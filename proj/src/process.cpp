#include "hawkesnet/process.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace hawkesnet {

void model_spec::validate() const {
    ground.validate();
    mark.validate();
    if (!(horizon > 0.0)) throw error("horizon T must be > 0");
    if (node_rate_cutoff && !(*node_rate_cutoff > 0.0 && *node_rate_cutoff <= 1.0))
        throw error("node_rate_cutoff must be a fraction in (0,1]");
}

double model_spec::lambda_nodes_at(double t) const {
    if (node_rate_cutoff && t > *node_rate_cutoff * horizon) return 0.0;
    return mark.lambda_nodes;
}

std::vector<double> realization::event_times() const {
    std::vector<double> times;
    times.reserve(events.size());
    for (const auto& ev : events) times.push_back(ev.time);
    return times;
}

double joint_intensity(const model_spec& spec, const std::vector<event_record>& events_before,
                       double t, const mark& m) {
    dynamic_network net;
    node_aux_table aux(spec.mark.activity, spec.mark.latent_dim);
    std::vector<double> times;
    for (const auto& ev : events_before) {
        if (ev.time >= t) throw non_monotone_time_error("t must follow the given history");
        apply_event(net, aux, ev);
        times.push_back(ev.time);
    }
    double lq;
    try {
        lq = log_prob_mark(spec.mark, net, aux, t, m, spec.lambda_nodes_at(t));
    } catch (const invalid_mark_error&) {
        return 0.0; // marks must be new with respect to G_{t-}
    }
    return std::exp(lq) * ground_intensity(t, times, spec.ground);
}

realization simulate(const model_spec& spec, std::uint64_t seed, long max_events) {
    spec.validate();
    realization out;
    out.seed = seed;
    out.spec = spec;
    out.aux = node_aux_table(spec.mark.activity, spec.mark.latent_dim);
    out.stability_warning = !spec.ground.stable();

    rng_t rng = make_rng(seed);
    dynamic_network net;
    const double T = spec.horizon;
    const ground_params& g = spec.ground;

    double t = 0.0;
    double excitation = 0.0; // sum exp(-beta (t - t_i)) over accepted events
    while (true) {
        const double dominating = g.mu + g.K * excitation;
        if (dominating <= 0.0) break; // mu = 0 and no history: nothing can arrive
        const double dt = exponential(rng, dominating);
        const double t_star = t + dt;
        if (t_star > T) break;

        const double decayed = excitation * std::exp(-g.beta * dt);
        const double rate = g.mu + g.K * decayed;
        if (rate > dominating * (1.0 + 1e-12))
            throw error("thinning invariant violated: rate exceeds the dominating bound");
        const double u = uniform01(rng);
        t = t_star;
        excitation = decayed;
        if (u * dominating > rate) continue; // thinned

        event_record ev;
        ev.time = t_star;
        ev.m = sample_mark(spec.mark, net, out.aux, t_star, rng,
                           spec.lambda_nodes_at(t_star), &out.diag);
        net.apply_mark(ev.time, ev.m);
        out.aux.note_edges(ev.m, ev.time);
        out.events.push_back(std::move(ev));
        excitation += 1.0;

        if (static_cast<long>(out.events.size()) >= max_events) {
            out.truncated = true;
            break;
        }
    }
    return out;
}

double mean_intensity_estimate(const model_spec& spec) {
    const double ratio = spec.ground.K / spec.ground.beta;
    if (ratio >= 1.0)
        throw unstable_process_error("branching ratio K/beta >= 1; mean intensity undefined");
    return spec.ground.mu / (1.0 - ratio);
}

branching_result branching_ratio(const model_spec& spec) {
    branching_result r;
    r.value = spec.ground.K / spec.ground.beta;
    r.stable = r.value < 1.0;
    return r;
}

// --- diagnostic kernels -----------------------------------------------------

namespace {

// Distinct triangles in net containing at least one of the mark's edges.
double mark_triangle_count(const mark& m, const dynamic_network& net) {
    std::set<std::array<node_id, 3>> tris;
    for (const edge_t& e : m.new_edges) {
        if (!net.has_node(e.u) || !net.has_node(e.v)) continue;
        const auto& nu = net.neighbors(e.u);
        for (node_id w : nu) {
            if (w == e.v) continue;
            if (net.has_edge(w, e.v)) {
                std::array<node_id, 3> tri{e.u, e.v, w};
                std::sort(tri.begin(), tri.end());
                tris.insert(tri);
            }
        }
    }
    return static_cast<double>(tris.size());
}

class exp_feedback_kernel final : public diagnostic_kernel {
public:
    exp_feedback_kernel(double alpha, double beta, double gamma)
        : alpha_(alpha), beta_(beta), gamma_(gamma) {
        if (!(beta_ > 0.0)) throw error("exp-feedback kernel needs beta > 0");
    }
    double mark_factor(const mark& m, const dynamic_network& net) const override {
        return alpha_ * (1.0 + gamma_ * mark_triangle_count(m, net));
    }
    double time_integral(double a, double b) const override {
        return (std::exp(-beta_ * a) - std::exp(-beta_ * b)) / beta_;
    }
    std::string name() const override { return "exp-feedback"; }

private:
    double alpha_, beta_, gamma_;
};

class powerlaw_degree_kernel final : public diagnostic_kernel {
public:
    powerlaw_degree_kernel(double alpha, double c, double p) : alpha_(alpha), c_(c), p_(p) {
        if (!(c_ > 0.0)) throw error("powerlaw kernel needs c > 0");
        if (p_ <= 1.0)
            throw non_integrable_kernel_error(
                "powerlaw kernel with p <= 1 has infinite expected offspring");
    }
    double mark_factor(const mark& m, const dynamic_network& net) const override {
        if (net.node_count() == 0) return 0.0;
        double deg = 0.0;
        for (node_id v : m.new_nodes)
            if (net.has_node(v)) deg += static_cast<double>(net.degree(v));
        return std::pow(deg / static_cast<double>(net.node_count()), alpha_);
    }
    double time_integral(double a, double b) const override {
        const double q = 1.0 - p_;
        return (c_ / -q) * (std::pow(1.0 + a / c_, q) - std::pow(1.0 + b / c_, q));
    }
    std::string name() const override { return "powerlaw-degree"; }

private:
    double alpha_, c_, p_;
};

} // namespace

std::unique_ptr<diagnostic_kernel> make_exp_feedback_kernel(double alpha, double beta,
                                                            double gamma) {
    return std::make_unique<exp_feedback_kernel>(alpha, beta, gamma);
}

std::unique_ptr<diagnostic_kernel> make_powerlaw_degree_kernel(double alpha, double c,
                                                               double p) {
    return std::make_unique<powerlaw_degree_kernel>(alpha, c, p);
}

std::unique_ptr<diagnostic_kernel> make_diagnostic_kernel(const std::string& name,
                                                          const std::vector<double>& params) {
    if (name == "exp-feedback") {
        if (params.size() != 3) throw error("exp-feedback takes alpha, beta, gamma");
        return make_exp_feedback_kernel(params[0], params[1], params[2]);
    }
    if (name == "powerlaw-degree") {
        if (params.size() != 3) throw error("powerlaw-degree takes alpha, c, p");
        return make_powerlaw_degree_kernel(params[0], params[1], params[2]);
    }
    throw error("unknown diagnostic kernel: " + name);
}

branching_mc_result estimate_branching_ratio_mc(const diagnostic_kernel& kernel,
                                                const model_spec& base, double horizon,
                                                int reps, std::uint64_t seed) {
    branching_mc_result out;
    std::vector<double> rep_means;
    rep_means.reserve(reps);

    for (int r = 0; r < reps; ++r) {
        rng_t rng = split_stream(seed, static_cast<std::uint64_t>(r));
        const realization real = simulate(base, rng());
        if (real.events.empty()) continue;

        // Walk the history once; the mark factor of every open event is
        // piecewise constant between network updates.
        dynamic_network net;
        node_aux_table aux(base.mark.activity, base.mark.latent_dim);
        const std::size_t n = real.events.size();
        std::vector<double> integral(n, 0.0);

        for (std::size_t i = 0; i < n; ++i) {
            apply_event(net, aux, real.events[i], &real.aux);
            const double seg_start = real.events[i].time;
            const double seg_end =
                i + 1 < n ? real.events[i + 1].time : real.events.back().time;
            // Accumulate this constant-network segment (and the tail after
            // the final event) into every event whose window covers it.
            for (std::size_t j = 0; j <= i; ++j) {
                const double t_j = real.events[j].time;
                const double lo = seg_start - t_j;
                const double hi = std::min(seg_end, t_j + horizon) - t_j;
                const double f = kernel.mark_factor(real.events[j].m, net);
                if (hi > lo) integral[j] += f * kernel.time_integral(lo, hi);
                if (i + 1 == n) { // frozen network after the last event
                    const double tail_lo = seg_end - t_j;
                    if (horizon > tail_lo)
                        integral[j] += f * kernel.time_integral(tail_lo, horizon);
                }
            }
        }

        double mean = 0.0;
        for (double v : integral) {
            if (v >= 1.0) out.sup_violation = true;
            mean += v;
        }
        mean /= static_cast<double>(n);
        rep_means.push_back(mean);
        out.events_evaluated += static_cast<long>(n);
    }

    if (rep_means.empty()) return out;
    double mean = 0.0;
    for (double v : rep_means) mean += v;
    mean /= rep_means.size();
    double var = 0.0;
    for (double v : rep_means) var += (v - mean) * (v - mean);
    out.estimate = mean;
    out.std_error =
        rep_means.size() > 1 ? std::sqrt(var / (rep_means.size() - 1.0) / rep_means.size()) : 0.0;
    return out;
}

} // namespace hawkesnet

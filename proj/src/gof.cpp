#include "hawkesnet/gof.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace hawkesnet {

residual_series rescale(const std::vector<double>& event_times, const ground_params& g) {
    g.validate();
    residual_series out;
    out.params = g;
    out.transformed_times.reserve(event_times.size());
    // Lambda(t_i) via the excitation recursion: contributions of events
    // j < i integrate to (K/beta)(1 - exp(-beta(t_i - t_j))).
    const auto a = excitation_sum_recursive(event_times, g.beta);
    double decayed_count = 0.0; // sum over j<i of (1 - exp(-beta(t_i-t_j)))
    for (std::size_t i = 0; i < event_times.size(); ++i) {
        decayed_count = static_cast<double>(i) - a[i];
        out.transformed_times.push_back(g.mu * event_times[i] +
                                        (g.K / g.beta) * decayed_count);
    }
    out.inter_arrivals.reserve(event_times.size());
    double prev = 0.0;
    for (double v : out.transformed_times) {
        out.inter_arrivals.push_back(v - prev);
        prev = v;
    }
    return out;
}

double ks_cdf_exact(std::size_t n, double d) {
    // Marsaglia, Tsang & Wang (2003): P(D_n < d) = n!/n^n * (H^n)_{kk}.
    if (d <= 0.0) return 0.0;
    if (d >= 1.0) return 1.0;
    const int k = static_cast<int>(n * d) + 1;
    const int m = 2 * k - 1;
    const double h = k - n * d;

    std::vector<std::vector<double>> H(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i - j + 1 >= 0) H[i][j] = 1.0;
    for (int i = 0; i < m; ++i) {
        H[i][0] -= std::pow(h, i + 1);
        H[m - 1][i] -= std::pow(h, m - i);
    }
    H[m - 1][0] += (2.0 * h - 1.0 > 0.0 ? std::pow(2.0 * h - 1.0, m) : 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i - j + 1 > 0)
                for (int g = 1; g <= i - j + 1; ++g) H[i][j] /= g;

    // H^n with exponent tracking to dodge overflow.
    int e_h = 0, e_q = 0;
    auto mat_mul = [m](const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b) {
        std::vector<std::vector<double>> c(m, std::vector<double>(m, 0.0));
        for (int i = 0; i < m; ++i)
            for (int l = 0; l < m; ++l) {
                const double aij = a[i][l];
                if (aij == 0.0) continue;
                for (int j = 0; j < m; ++j) c[i][j] += aij * b[l][j];
            }
        return c;
    };
    std::vector<std::vector<double>> Q(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) Q[i][i] = 1.0;
    std::size_t p = n;
    auto base = H;
    while (p > 0) {
        if (p & 1) {
            Q = mat_mul(Q, base);
            e_q += e_h;
            if (Q[k - 1][k - 1] > 1e140) {
                for (auto& row : Q)
                    for (double& v : row) v *= 1e-140;
                e_q += 140;
            }
        }
        base = mat_mul(base, base);
        e_h *= 2;
        if (base[k - 1][k - 1] > 1e140) {
            for (auto& row : base)
                for (double& v : row) v *= 1e-140;
            e_h += 140;
        }
        p >>= 1;
    }

    double s = Q[k - 1][k - 1];
    int e_s = e_q;
    for (std::size_t i = 1; i <= n; ++i) {
        s *= static_cast<double>(i) / static_cast<double>(n);
        if (s < 1e-140) {
            s *= 1e140;
            e_s -= 140;
        }
    }
    return s * std::pow(10.0, e_s);
}

namespace {

// Kolmogorov tail with Stephens' small-sample adjustment.
double ks_pvalue_asymptotic(std::size_t n, double d) {
    const double sqn = std::sqrt(static_cast<double>(n));
    const double lambda = (sqn + 0.12 + 0.11 / sqn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

} // namespace

ks_result ks_test_exponential(std::vector<double> samples, double rate,
                              std::size_t exact_below) {
    const std::size_t n = samples.size();
    if (n < 8) throw too_few_samples_error("ks test needs at least 8 samples");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = 1.0 - std::exp(-rate * std::max(samples[i], 0.0));
        d = std::max(d, std::max((i + 1.0) / n - f, f - static_cast<double>(i) / n));
    }
    ks_result out;
    out.statistic = d;
    if (n < exact_below) {
        out.exact = true;
        out.p_value = std::clamp(1.0 - ks_cdf_exact(n, d), 0.0, 1.0);
    } else {
        out.p_value = ks_pvalue_asymptotic(n, d);
    }
    return out;
}

bootstrap_result bootstrap_pvalue(const std::vector<event_record>& events,
                                  const model_spec& fitted, int reps, std::uint64_t seed,
                                  int jobs, bool full_refit) {
    if (reps < 99) throw error("bootstrap_pvalue requires reps >= 99");
    bootstrap_result out;

    std::vector<double> times;
    for (const auto& ev : events) times.push_back(ev.time);
    const residual_series obs = rescale(times, fitted.ground);
    out.observed_statistic = ks_test_exponential(obs.inter_arrivals).statistic;

    std::vector<double> stats(reps, -1.0); // -1 marks a failed replicate

    // a near-critical fitted model must not stall the bootstrap
    const long event_cap =
        std::max<long>(100000, 100 * static_cast<long>(events.size()));

    auto worker = [&](int begin, int end) {
        for (int b = begin; b < end; ++b) {
            rng_t stream = split_stream(seed, static_cast<std::uint64_t>(b));
            try {
                const realization sim = simulate(fitted, stream(), event_cap);
                if (sim.truncated || sim.events.size() < 8) continue;
                const std::vector<double> sim_times = sim.event_times();
                ground_params refit;
                if (full_refit) {
                    const fit_result fr = fit_mle(sim.events, fitted, {}, &sim.aux);
                    refit = fr.fitted.ground;
                } else {
                    fit_options gopts;
                    gopts.restarts = 2;
                    refit = fit_ground(sim_times, fitted.horizon, gopts).fitted.ground;
                }
                const residual_series rs = rescale(sim_times, refit);
                stats[b] = ks_test_exponential(rs.inter_arrivals).statistic;
            } catch (const error&) {
                // counted below
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

    int exceed = 0;
    for (double s : stats) {
        if (s < 0.0) ++out.failures;
        else if (s >= out.observed_statistic) ++exceed;
    }
    out.reps_used = reps - out.failures;
    if (out.failures * 5 > reps)
        throw bootstrap_failure_error("more than 20% of bootstrap replicates failed");
    out.p_value = (1.0 + exceed) / (out.reps_used + 1.0);
    return out;
}

} // namespace hawkesnet

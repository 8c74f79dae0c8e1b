// hawkesnet command line: simulate / fit / replicate / stats / gof / convert.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hawkesnet/estimate.hpp"
#include "hawkesnet/gof.hpp"
#include "hawkesnet/ingest.hpp"

using namespace hawkesnet;

namespace {

// --- config file ------------------------------------------------------------

struct config_entry {
    const char* key;
    const char* def;
    const char* help;
};

const std::vector<config_entry>& config_schema() {
    static const std::vector<config_entry> schema = {
        {"ground.mu", "10", "background event rate"},
        {"ground.K", "0.5", "excitation weight"},
        {"ground.beta", "2", "temporal decay rate of the excitation kernel"},
        {"mark.model", "ba", "mark model: ba | cs | sbm | ls"},
        {"mark.tau", "0.5", "mark decay rate"},
        {"mark.theta", "", "coefficients: one per stat (cs) or one distance coefficient (ls)"},
        {"mark.stats", "edges,triangles,twostar,threestar", "cs change statistics"},
        {"mark.nu", "0", "cs baseline edge weight"},
        {"mark.lambda_nodes", "1", "mean new nodes per event (cs/sbm/ls)"},
        {"mark.block_probs", "0.5,0.5", "sbm community membership probabilities"},
        {"mark.block_matrix", "0.8,0.1;0.1,0.8", "sbm edge probabilities, rows ; separated"},
        {"mark.latent_dim", "2", "ls latent space dimension"},
        {"mark.latent_scale", "1", "ls placement scale (sd)"},
        {"mark.edge_scope", "", "new-node | all-pairs (default: all-pairs for cs)"},
        {"mark.activity", "arrival", "node activity time: arrival | last-edge"},
        {"horizon.T", "10", "observation horizon"},
        {"horizon.node_cutoff", "", "fraction of T after which lambda_nodes is 0"},
        {"optimizer.max_evals", "4000", "objective evaluation budget per start"},
        {"optimizer.restarts", "5", "random restarts beyond the first start"},
        {"optimizer.fix", "", "comma list of name=value to pin"},
        {"optimizer.init", "", "comma list of name=value starting points"},
        {"optimizer.se", "hessian", "standard error method: hessian | replication"},
        {"seeds.master", "1", "master seed"},
        {"io.out", "", "output path"},
    };
    return schema;
}

using config_map = std::map<std::string, std::string>;

config_map config_defaults() {
    config_map m;
    for (const auto& e : config_schema()) m[e.key] = e.def;
    return m;
}

void load_config_file(const std::string& path, config_map& cfg) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config: " + path);
    std::string line, section;
    long line_no = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        if (!cfg.count(key))
            throw config_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        cfg[key] = trim(line.substr(eq + 1));
    }
}

double to_double(const config_map& cfg, const std::string& key) {
    const std::string& s = cfg.at(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("bad number for " + key + ": '" + s + "'");
    }
}

std::vector<double> to_doubles(const config_map& cfg, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(cfg.at(key));
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

std::map<std::string, double> parse_assignments(const std::string& list) {
    std::map<std::string, double> out;
    for (const auto& tok : split_list(list)) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw config_error("expected name=value, got '" + tok + "'");
        out[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    }
    return out;
}

edge_scope parse_scope(const std::string& s) {
    if (s == "new-node" || s == "new_node_only") return edge_scope::new_node_only;
    if (s == "all-pairs" || s == "all_pairs") return edge_scope::all_pairs;
    throw config_error("bad edge scope: " + s);
}

activity_mode parse_activity(const std::string& s) {
    if (s == "arrival") return activity_mode::arrival;
    if (s == "last-edge" || s == "last_edge") return activity_mode::last_edge;
    throw config_error("bad activity mode: " + s);
}

model_spec build_spec(const config_map& cfg) {
    model_spec spec;
    spec.ground.mu = to_double(cfg, "ground.mu");
    spec.ground.K = to_double(cfg, "ground.K");
    spec.ground.beta = to_double(cfg, "ground.beta");

    const mark_family family = parse_mark_family(cfg.at("mark.model"));
    spec.mark = mark_model_spec::defaults(family);
    spec.mark.tau = to_double(cfg, "mark.tau");
    spec.mark.nu = to_double(cfg, "mark.nu");
    spec.mark.lambda_nodes = to_double(cfg, "mark.lambda_nodes");
    spec.mark.stats = split_list(cfg.at("mark.stats"));
    if (!cfg.at("mark.theta").empty()) spec.mark.theta = to_doubles(cfg, "mark.theta");
    if (family == mark_family::cs && spec.mark.theta.size() != spec.mark.stats.size())
        spec.mark.theta.resize(spec.mark.stats.size(), 0.0);
    spec.mark.block_probs = to_doubles(cfg, "mark.block_probs");
    spec.mark.block_matrix.clear();
    for (const auto& row : split_list(cfg.at("mark.block_matrix"), ';')) {
        std::vector<double> r;
        for (const auto& v : split_list(row)) r.push_back(std::stod(v));
        spec.mark.block_matrix.push_back(std::move(r));
    }
    spec.mark.latent_dim = static_cast<int>(to_double(cfg, "mark.latent_dim"));
    spec.mark.latent_scale = to_double(cfg, "mark.latent_scale");
    if (!cfg.at("mark.edge_scope").empty())
        spec.mark.scope = parse_scope(cfg.at("mark.edge_scope"));
    spec.mark.activity = parse_activity(cfg.at("mark.activity"));

    spec.horizon = to_double(cfg, "horizon.T");
    if (!cfg.at("horizon.node_cutoff").empty())
        spec.node_rate_cutoff = to_double(cfg, "horizon.node_cutoff");
    spec.validate();
    return spec;
}

fit_options build_fit_options(const config_map& cfg) {
    fit_options opts;
    opts.max_evals = static_cast<int>(to_double(cfg, "optimizer.max_evals"));
    opts.restarts = static_cast<int>(to_double(cfg, "optimizer.restarts"));
    opts.fixed = parse_assignments(cfg.at("optimizer.fix"));
    opts.init = parse_assignments(cfg.at("optimizer.init"));
    opts.seed = static_cast<std::uint64_t>(to_double(cfg, "seeds.master"));
    return opts;
}

void print_explain(const config_map& cfg) {
    std::string section;
    for (const auto& e : config_schema()) {
        const std::string key = e.key;
        const std::string sec = key.substr(0, key.find('.'));
        if (sec != section) {
            std::cout << "[" << sec << "]\n";
            section = sec;
        }
        std::cout << "  " << key.substr(key.find('.') + 1) << " = " << cfg.at(key) << "  # "
                  << e.help << "\n";
    }
}

// --- report formats -----------------------------------------------------------

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw error("cannot open for writing: " + path);
    return file;
}

void write_fit_report(std::ostream& os, const fit_result& fit, const model_spec& family,
                      std::size_t n_events, double window_start) {
    os << "model = " << to_string(family.mark.family) << "\n";
    os << "events = " << n_events << "\n";
    os << "T = " << fmt(family.horizon) << "\n";
    os << "window_start = " << fmt(window_start) << "\n";
    os << "activity = "
       << (family.mark.activity == activity_mode::arrival ? "arrival" : "last-edge") << "\n";
    os << "edge_scope = "
       << (family.mark.scope == edge_scope::all_pairs ? "all-pairs" : "new-node") << "\n";
    os << "node_cutoff = "
       << (family.node_rate_cutoff ? fmt(*family.node_rate_cutoff) : std::string("none"))
       << "\n";
    if (family.mark.family == mark_family::cs) {
        os << "stats = ";
        for (std::size_t i = 0; i < family.mark.stats.size(); ++i)
            os << (i ? "," : "") << family.mark.stats[i];
        os << "\n";
    }
    os << "loglik = " << fmt(fit.loglik) << "\n";
    os << "aic = " << fmt(fit.aic) << "\n";
    os << "converged = " << (fit.converged ? "true" : "false") << "\n";
    os << "iterations = " << fit.iterations << "\n";
    os << "clamp_events = " << fit.diag.clamp_events << "\n";
    os << "zero_likelihood_edges = " << fit.diag.zero_likelihood_edges << "\n";
    os << "se_method = " << (fit.se_method.empty() ? "none" : fit.se_method) << "\n";
    os << "[parameters]\n";
    os << "name\testimate\tstd_error\tstatus\n";
    for (const auto& name : fit.free_names) {
        os << name << "\t" << fmt(fit.estimates.at(name)) << "\t";
        if (fit.std_errors.count(name)) os << fmt(fit.std_errors.at(name));
        else os << "-";
        os << "\tfree\n";
    }
    for (const auto& [name, v] : fit.estimates) {
        if (std::find(fit.free_names.begin(), fit.free_names.end(), name) !=
            fit.free_names.end())
            continue;
        os << name << "\t" << fmt(v) << "\t-\tfixed\n";
    }
}

// Pull ground parameters back out of a fit report.
ground_params read_ground_from_report(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw error("cannot open fit report: " + path);
    ground_params g{0.0, 0.0, 1.0};
    bool in_params = false;
    std::string line;
    bool saw_mu = false, saw_beta = false;
    while (std::getline(is, line)) {
        if (line == "[parameters]") {
            in_params = true;
            continue;
        }
        if (!in_params) continue;
        std::stringstream ss(line);
        std::string name, estimate;
        if (!std::getline(ss, name, '\t') || !std::getline(ss, estimate, '\t')) continue;
        if (name == "mu") { g.mu = std::stod(estimate); saw_mu = true; }
        if (name == "K") g.K = std::stod(estimate);
        if (name == "beta") { g.beta = std::stod(estimate); saw_beta = true; }
    }
    if (!saw_mu || !saw_beta)
        throw error("fit report lacks ground parameters: " + path);
    return g;
}

std::string spec_summary(const model_spec& spec) {
    std::ostringstream os;
    os << "model=" << to_string(spec.mark.family) << " mu=" << spec.ground.mu
       << " K=" << spec.ground.K << " beta=" << spec.ground.beta
       << " tau=" << spec.mark.tau;
    if (spec.mark.family != mark_family::ba)
        os << " lambda_nodes=" << spec.mark.lambda_nodes;
    if (spec.mark.family == mark_family::cs) {
        os << " theta=";
        for (std::size_t i = 0; i < spec.mark.theta.size(); ++i)
            os << (i ? "," : "") << spec.mark.theta[i];
    }
    if (spec.node_rate_cutoff) os << " node_cutoff=" << *spec.node_rate_cutoff;
    return os.str();
}

void write_stream_for(const realization& r, const model_spec& spec, std::uint64_t seed,
                      const std::string& path) {
    event_stream stream;
    stream.T = spec.horizon;
    stream.events = r.events;
    stream.header["seed"] = std::to_string(seed);
    stream.header["model"] = to_string(spec.mark.family);
    stream.header["spec"] = spec_summary(spec);
    write_events_file(path, stream);
}

// --- subcommands ----------------------------------------------------------------

int cmd_simulate(const config_map& cfg, std::uint64_t seed, const std::string& out) {
    const model_spec spec = build_spec(cfg);
    const realization r = simulate(spec, seed);
    if (r.stability_warning)
        std::cerr << "warning: K/beta >= 1, process may be explosive\n";
    if (r.truncated)
        std::cerr << "warning: explosion guard tripped; realization truncated\n";
    if (r.events.empty())
        std::cerr << "warning: realization is empty\n";
    if (!out.empty()) write_stream_for(r, spec, seed, out);

    const dynamic_network net = replay(r.events);
    const auto br = branching_ratio(spec);
    std::cout << "events = " << r.events.size() << "\n";
    std::cout << "nodes = " << net.node_count() << "\n";
    std::cout << "edges = " << net.edge_count() << "\n";
    std::cout << "branching_ratio = " << fmt(br.value) << "\n";
    std::cout << "stable = " << (br.stable ? "true" : "false") << "\n";
    std::cout << "clamp_events = " << r.diag.clamp_events << "\n";
    std::cout << "truncated = " << (r.truncated ? "true" : "false") << "\n";
    return r.truncated ? 1 : 0;
}

int cmd_fit(const std::string& events_path, const config_map& cfg, const std::string& out,
            const std::string& se_method) {
    const event_stream stream = parse_events_file(events_path);
    model_spec family = build_spec(cfg);
    family.horizon = stream.T;

    fit_options opts = build_fit_options(cfg);
    fit_result fit = fit_mle(stream.events, family, opts);
    if (fit.converged && se_method != "none")
        std_errors(stream.events, family, fit, se_method, opts);

    std::ofstream file;
    std::ostream& os = open_or_stdout(file, out);
    write_fit_report(os, fit, family, stream.events.size(), opts.window_start);
    if (!fit.converged) std::cerr << "warning: optimizer did not converge\n";
    return 0;
}

int cmd_replicate(const config_map& cfg, int reps, int jobs, const std::string& out) {
    const model_spec truth = build_spec(cfg);
    fit_options opts = build_fit_options(cfg);
    const std::uint64_t master = static_cast<std::uint64_t>(to_double(cfg, "seeds.master"));
    if (reps == 1)
        std::cerr << "warning: reps = 1 leaves the sd column empty\n";
    const replication_summary summary =
        replicate_experiment(truth, std::max(reps, 2), master, opts, jobs);

    std::ofstream file;
    std::ostream& os = open_or_stdout(file, out);
    os << "parameter,truth,mean,sd,failures\n";
    for (const auto& row : summary.rows) {
        os << row.name << "," << fmt(row.truth) << "," << fmt(row.mean) << ",";
        if (reps > 1) os << fmt(row.sd);
        os << "," << summary.failures << "\n";
    }
    return 0;
}

int cmd_stats(const std::string& events_path, const std::string& out_prefix) {
    const event_stream stream = parse_events_file(events_path);
    const dynamic_network net = replay(stream.events);
    const auto summary = summary_statistics(net);
    const auto deg = degree_distribution(net);
    const auto esp = esp_distribution(net);

    auto write_csv = [&](const std::string& suffix, auto writer) {
        if (out_prefix.empty()) {
            writer(std::cout);
            return;
        }
        std::ofstream os(out_prefix + suffix, std::ios::binary);
        if (!os) throw error("cannot open for writing: " + out_prefix + suffix);
        writer(os);
    };
    write_csv(".summary.csv", [&](std::ostream& os) {
        os << "statistic,value\n";
        for (const auto& [k, v] : summary) os << k << "," << fmt(v) << "\n";
    });
    write_csv(".degree.csv", [&](std::ostream& os) {
        os << "degree,count\n";
        for (const auto& [k, v] : deg) os << k << "," << v << "\n";
    });
    write_csv(".esp.csv", [&](std::ostream& os) {
        os << "esp,count\n";
        for (const auto& [k, v] : esp) os << k << "," << v << "\n";
    });
    return 0;
}

int cmd_gof(const std::string& events_path, const std::string& report_path, int bootstrap,
            std::uint64_t seed, int jobs, const std::string& out) {
    const event_stream stream = parse_events_file(events_path);
    const ground_params g = read_ground_from_report(report_path);
    std::vector<double> times;
    for (const auto& ev : stream.events) times.push_back(ev.time);
    const residual_series rs = rescale(times, g);
    const ks_result ks = ks_test_exponential(rs.inter_arrivals);

    if (!out.empty()) {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw error("cannot open for writing: " + out);
        os << "index,transformed_time\n";
        for (std::size_t i = 0; i < rs.transformed_times.size(); ++i)
            os << i << "," << fmt(rs.transformed_times[i]) << "\n";
    }

    std::cout << "events = " << times.size() << "\n";
    std::cout << "ks_statistic = " << fmt(ks.statistic) << "\n";
    std::cout << "ks_pvalue = " << fmt(ks.p_value) << "\n";
    std::cout << "ks_method = " << (ks.exact ? "exact" : "asymptotic") << "\n";
    if (bootstrap > 0) {
        model_spec fitted;
        fitted.ground = g;
        fitted.mark = mark_model_spec::defaults(mark_family::ba);
        fitted.horizon = stream.T;
        const bootstrap_result br = bootstrap_pvalue(stream.events, fitted, bootstrap, seed, jobs);
        std::cout << "bootstrap_pvalue = " << fmt(br.p_value) << "\n";
        std::cout << "bootstrap_failures = " << br.failures << "\n";
    }
    std::cout << "note = the time rescaling integrates over the mark space and carries no "
                 "information about mark-parameter fit\n";
    return 0;
}

int cmd_convert(const std::string& contacts_path, const std::string& out, double rescale_T,
                double horizon) {
    const auto rows = parse_contact_rows_file(contacts_path);
    contact_options opts;
    if (rescale_T > 0.0) opts.rescale_T = rescale_T;
    if (horizon > 0.0) opts.horizon = horizon;
    const contact_result res = contacts_to_events(rows, opts);
    if (!out.empty()) {
        write_events_file(out, res.stream);
        write_dictionary_file(out + ".dict", res.dictionary);
    }
    const dynamic_network net = replay(res.stream.events);
    std::cout << "events = " << res.stream.events.size() << "\n";
    std::cout << "nodes = " << net.node_count() << "\n";
    std::cout << "edges = " << net.edge_count() << "\n";
    std::cout << "dropped_repeats = " << res.dropped_repeats << "\n";
    std::cout << "dropped_self_loops = " << res.dropped_self_loops << "\n";
    std::cout << "T = " << fmt(res.stream.T) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"HawkesNet: self-exciting network growth processes"};
    app.require_subcommand(0, 1);
    app.fallthrough(); // --config / --explain may follow the subcommand
    app.option_defaults()->always_capture_default();

    config_map cfg = config_defaults();
    std::string config_path;
    bool explain = false;
    app.add_option("--config", config_path, "config file (ini-style key = value)");
    app.add_flag("--explain", explain, "print the full config schema with defaults and exit");

    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out, model;
    int jobs = 1;

    auto* sim = app.add_subcommand("simulate", "simulate a realization and write an event stream");
    sim->add_option("--seed", seed, "rng seed")->each([&](const std::string&) { seed_given = true; });
    sim->add_option("--out", out, "event stream output path");
    sim->add_option("--model", model, "mark model: ba|cs|sbm|ls");

    std::string events_path, se_method, activity, scope;
    double node_cutoff = -1.0;
    std::vector<std::string> fixes, inits;
    auto* fit = app.add_subcommand("fit", "maximum-likelihood fit of an event stream");
    fit->add_option("events", events_path, "event stream path")->required();
    fit->add_option("--model", model, "mark model: ba|cs|sbm|ls");
    fit->add_option("--out", out, "report path (stdout when omitted)");
    fit->add_option("--se", se_method,
                    "std error method: hessian|replication|none (default from config)");
    fit->add_option("--activity", activity, "activity time: arrival|last-edge");
    fit->add_option("--edge-scope", scope, "edge scope: new-node|all-pairs");
    fit->add_option("--node-cutoff", node_cutoff, "fraction of T after which lambda_nodes = 0");
    fit->add_option("--fix", fixes, "pin parameter, e.g. --fix K=1");
    fit->add_option("--init", inits, "starting value, e.g. --init tau=0.3");

    int reps = 100, bootstrap = 0;
    auto* rep = app.add_subcommand("replicate", "simulate + fit replication study");
    rep->add_option("--reps", reps, "number of replications");
    rep->add_option("--jobs", jobs, "parallel jobs");
    rep->add_option("--seed", seed, "master seed")->each([&](const std::string&) { seed_given = true; });
    rep->add_option("--out", out, "summary table path");
    rep->add_option("--model", model, "mark model: ba|cs|sbm|ls");

    auto* stats = app.add_subcommand("stats", "network summary statistics and histograms");
    stats->add_option("events", events_path, "event stream path")->required();
    stats->add_option("--out", out, "csv path prefix (stdout when omitted)");

    std::string report_path;
    auto* gof = app.add_subcommand("gof", "residual goodness-of-fit for a fitted model");
    gof->add_option("events", events_path, "event stream path")->required();
    gof->add_option("--report", report_path, "fit report with ground parameters")->required();
    gof->add_option("--bootstrap", bootstrap, "parametric bootstrap replications (>= 99)");
    gof->add_option("--seed", seed, "bootstrap seed")->each([&](const std::string&) { seed_given = true; });
    gof->add_option("--jobs", jobs, "parallel jobs");
    gof->add_option("--out", out, "residual series csv path");

    double rescale_T = 0.0, horizon = 0.0;
    auto* conv = app.add_subcommand("convert", "convert 't i j' contact rows to an event stream");
    conv->add_option("contacts", events_path, "contact rows path")->required();
    conv->add_option("--out", out, "event stream output path");
    conv->add_option("--rescale-T", rescale_T, "affinely rescale times onto (0, T]");
    conv->add_option("--horizon", horizon, "observation horizon when not rescaling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) load_config_file(config_path, cfg);
        if (!model.empty()) cfg["mark.model"] = model;
        if (seed_given) cfg["seeds.master"] = std::to_string(seed);
        if (!activity.empty()) cfg["mark.activity"] = activity;
        if (!scope.empty()) cfg["mark.edge_scope"] = scope;
        if (node_cutoff > 0.0) cfg["horizon.node_cutoff"] = std::to_string(node_cutoff);
        for (const auto& f : fixes)
            cfg["optimizer.fix"] += (cfg["optimizer.fix"].empty() ? "" : ",") + f;
        for (const auto& i : inits)
            cfg["optimizer.init"] += (cfg["optimizer.init"].empty() ? "" : ",") + i;

        if (explain) {
            print_explain(cfg);
            return 0;
        }
        if (app.get_subcommands().empty())
            throw config_error("a subcommand is required; see --help");

        const std::uint64_t master = static_cast<std::uint64_t>(to_double(cfg, "seeds.master"));
        if (out.empty()) out = cfg.at("io.out");

        if (se_method.empty()) se_method = cfg.at("optimizer.se");

        if (sim->parsed()) return cmd_simulate(cfg, master, out);
        if (fit->parsed()) return cmd_fit(events_path, cfg, out, se_method);
        if (rep->parsed()) return cmd_replicate(cfg, reps, jobs, out);
        if (stats->parsed()) return cmd_stats(events_path, out);
        if (gof->parsed()) return cmd_gof(events_path, report_path, bootstrap, master, jobs, out);
        if (conv->parsed()) return cmd_convert(events_path, out, rescale_T, horizon);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return what.rfind("cannot open", 0) == 0 ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

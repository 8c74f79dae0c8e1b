#include "hawkesnet/dynet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace hawkesnet {

bool dynamic_network::has_edge(node_id a, node_id b) const {
    if (a == b || !has_node(a) || !has_node(b)) return false;
    const auto& na = adj_[a];
    const auto& nb = adj_[b];
    const auto& shorter = na.size() <= nb.size() ? na : nb;
    const node_id other = na.size() <= nb.size() ? b : a;
    return std::binary_search(shorter.begin(), shorter.end(), other);
}

double dynamic_network::edge_birth(node_id a, node_id b) const {
    edge_t e(a, b);
    auto it = edge_index_.find(edge_key(e.u, e.v));
    if (it == edge_index_.end())
        throw unknown_endpoint_error("edge not present");
    return edge_birth_[it->second];
}

std::size_t dynamic_network::common_neighbor_count(node_id a, node_id b) const {
    if (!has_node(a) || !has_node(b)) return 0;
    const auto& na = adj_[a];
    const auto& nb = adj_[b];
    std::size_t count = 0;
    auto i = na.begin();
    auto j = nb.begin();
    while (i != na.end() && j != nb.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else { ++count; ++i; ++j; }
    }
    return count;
}

void dynamic_network::apply_mark(double t, const mark& m) {
    if (t <= last_birth_)
        throw non_monotone_time_error("mark time does not advance the network clock");

    // New labels must extend the dense index range in order.
    const node_id base = static_cast<node_id>(node_birth_.size());
    std::vector<node_id> nodes = m.new_nodes;
    std::sort(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] != base + i)
            throw unknown_endpoint_error("new node label " + std::to_string(nodes[i]) +
                                         " is not the next dense index");
    }
    const node_id top = base + static_cast<node_id>(nodes.size());

    std::set<edge_t> seen;
    for (const edge_t& e : m.new_edges) {
        if (e.u == e.v)
            throw duplicate_edge_error("self-loop " + std::to_string(e.u));
        if (e.v >= top)
            throw unknown_endpoint_error("edge endpoint " + std::to_string(e.v) +
                                         " is neither existing nor new");
        if (!seen.insert(e).second)
            throw duplicate_edge_error("edge repeated within mark");
        if (has_edge(e.u, e.v))
            throw duplicate_edge_error("edge (" + std::to_string(e.u) + "," +
                                       std::to_string(e.v) + ") already present");
    }

    // All checks passed; commit.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        node_birth_.push_back(t);
        adj_.emplace_back();
    }
    for (const edge_t& e : m.new_edges) {
        auto& au = adj_[e.u];
        auto& av = adj_[e.v];
        au.insert(std::upper_bound(au.begin(), au.end(), e.v), e.v);
        av.insert(std::upper_bound(av.begin(), av.end(), e.u), e.u);
        edge_index_[edge_key(e.u, e.v)] = edges_.size();
        edges_.push_back(e);
        edge_birth_.push_back(t);
    }
    last_birth_ = t;
}

// --- change statistics ------------------------------------------------

namespace {

std::size_t degree_or_zero(const dynamic_network& net, node_id i) {
    return net.has_node(i) ? net.degree(i) : 0;
}

double cs_edges(const dynamic_network&, node_id, node_id) { return 1.0; }

double cs_triangles(const dynamic_network& net, node_id a, node_id b) {
    if (!net.has_node(a) || !net.has_node(b)) return 0.0;
    return static_cast<double>(net.common_neighbor_count(a, b));
}

// Adding (a,b) creates C(d,k-1) new k-stars at each endpoint.
double cs_twostar(const dynamic_network& net, node_id a, node_id b) {
    return static_cast<double>(degree_or_zero(net, a) + degree_or_zero(net, b));
}

double cs_threestar(const dynamic_network& net, node_id a, node_id b) {
    const double da = static_cast<double>(degree_or_zero(net, a));
    const double db = static_cast<double>(degree_or_zero(net, b));
    return da * (da - 1.0) / 2.0 + db * (db - 1.0) / 2.0;
}

std::map<std::string, change_stat_fn>& mutable_registry() {
    static std::map<std::string, change_stat_fn> reg = {
        {"edges", cs_edges},
        {"triangles", cs_triangles},
        {"twostar", cs_twostar},
        {"threestar", cs_threestar},
    };
    return reg;
}

std::string canonical_stat_name(std::string name) {
    if (name == "2-star" || name == "2star") return "twostar";
    if (name == "3-star" || name == "3star") return "threestar";
    return name;
}

} // namespace

const std::map<std::string, change_stat_fn>& change_stat_registry() {
    return mutable_registry();
}

void register_change_stat(const std::string& name, change_stat_fn fn) {
    mutable_registry()[canonical_stat_name(name)] = fn;
}

change_stat_fn lookup_change_stat(const std::string& name) {
    const auto& reg = mutable_registry();
    auto it = reg.find(canonical_stat_name(name));
    if (it == reg.end())
        throw unknown_statistic_error("unknown change statistic: " + name);
    return it->second;
}

change_stat_vector change_statistics(const dynamic_network& net, edge_t candidate,
                                     const std::vector<std::string>& stats) {
    if (net.has_edge(candidate.u, candidate.v))
        throw duplicate_edge_error("candidate edge already present");
    change_stat_vector out;
    out.names.reserve(stats.size());
    out.values.resize(stats.size());
    std::vector<change_stat_fn> fns;
    fns.reserve(stats.size());
    for (const auto& s : stats) {
        out.names.push_back(canonical_stat_name(s));
        fns.push_back(lookup_change_stat(s));
    }
    change_statistics_into(net, candidate.u, candidate.v, fns, out.values.data());
    return out;
}

void change_statistics_into(const dynamic_network& net, node_id a, node_id b,
                            const std::vector<change_stat_fn>& fns, double* values) {
    for (std::size_t k = 0; k < fns.size(); ++k) values[k] = fns[k](net, a, b);
}

// --- whole-network statistics ------------------------------------------

namespace {

// Single-source BFS distances; unreachable stays -1.
void bfs_distances(const dynamic_network& net, node_id s, std::vector<int>& dist) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<node_id> queue{s};
    while (!queue.empty()) {
        node_id u = queue.front();
        queue.pop_front();
        for (node_id w : net.neighbors(u)) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

// Brandes accumulation for unweighted betweenness.
std::vector<double> betweenness_scores(const dynamic_network& net) {
    const std::size_t n = net.node_count();
    std::vector<double> score(n, 0.0);
    std::vector<long> sigma(n);
    std::vector<int> dist(n);
    std::vector<double> delta(n);
    std::vector<std::vector<node_id>> pred(n);
    std::vector<node_id> order;
    order.reserve(n);

    for (node_id s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0L);
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : pred) p.clear();
        order.clear();

        sigma[s] = 1;
        dist[s] = 0;
        std::deque<node_id> queue{s};
        while (!queue.empty()) {
            node_id u = queue.front();
            queue.pop_front();
            order.push_back(u);
            for (node_id w : net.neighbors(u)) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[u] + 1) {
                    sigma[w] += sigma[u];
                    pred[w].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            node_id w = *it;
            for (node_id u : pred[w])
                delta[u] += (static_cast<double>(sigma[u]) / sigma[w]) * (1.0 + delta[w]);
            if (w != s) score[w] += delta[w];
        }
    }
    // Each undirected pair was counted from both endpoints.
    for (double& x : score) x /= 2.0;
    return score;
}

std::vector<double> eigenvector_scores(const dynamic_network& net) {
    const std::size_t n = net.node_count();
    std::vector<double> x(n, 1.0), y(n, 0.0);
    if (net.edge_count() == 0) return std::vector<double>(n, 0.0);
    for (int iter = 0; iter < 1000; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (node_id w : net.neighbors(static_cast<node_id>(i))) s += x[w];
            y[i] = s;
        }
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return std::vector<double>(n, 0.0);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= norm;
            diff = std::max(diff, std::fabs(y[i] - x[i]));
        }
        x.swap(y);
        if (diff < 1e-13) break;
    }
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, std::fabs(v));
    if (mx > 0.0)
        for (double& v : x) v = std::fabs(v) / mx;
    return x;
}

} // namespace

std::map<std::string, double> summary_statistics(const dynamic_network& net) {
    const std::size_t n = net.node_count();
    if (n == 0) throw empty_network_error("summary_statistics on empty network");

    std::map<std::string, double> out;
    out["node_count"] = static_cast<double>(n);
    out["edge_count"] = static_cast<double>(net.edge_count());

    double mean_deg_cent = 0.0;
    if (n > 1) {
        for (node_id i = 0; i < n; ++i)
            mean_deg_cent += static_cast<double>(net.degree(i)) / (n - 1);
        mean_deg_cent /= n;
    }
    out["mean_degree_centrality"] = mean_deg_cent;

    double mean_betw = 0.0;
    if (n > 2) {
        const auto bscores = betweenness_scores(net);
        const double pairs = (n - 1.0) * (n - 2.0) / 2.0;
        for (double b : bscores) mean_betw += b / pairs;
        mean_betw /= n;
    }
    out["mean_betweenness"] = mean_betw;

    // Harmonic closeness handles disconnected graphs without a special case.
    double mean_close = 0.0;
    if (n > 1) {
        std::vector<int> dist(n);
        for (node_id s = 0; s < n; ++s) {
            bfs_distances(net, s, dist);
            double h = 0.0;
            for (node_id j = 0; j < n; ++j)
                if (j != s && dist[j] > 0) h += 1.0 / dist[j];
            mean_close += h / (n - 1);
        }
        mean_close /= n;
    }
    out["mean_closeness"] = mean_close;

    const auto eig = eigenvector_scores(net);
    double mean_eig = 0.0;
    for (double e : eig) mean_eig += e;
    out["mean_eigenvector"] = n ? mean_eig / n : 0.0;

    double closed_triples = 0.0;
    double triples = 0.0;
    double mean_local = 0.0;
    for (node_id i = 0; i < n; ++i) {
        const auto& nb = net.neighbors(i);
        const double d = static_cast<double>(nb.size());
        double closed = 0.0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (net.has_edge(nb[a], nb[b])) closed += 1.0;
        closed_triples += closed;
        triples += d * (d - 1.0) / 2.0;
        if (d >= 2.0) mean_local += closed / (d * (d - 1.0) / 2.0);
    }
    out["global_clustering"] = triples > 0.0 ? closed_triples / triples : 0.0;
    out["mean_local_clustering"] = mean_local / n;
    return out;
}

std::map<std::size_t, std::size_t> degree_distribution(const dynamic_network& net) {
    if (net.node_count() == 0) throw empty_network_error("degree_distribution on empty network");
    std::map<std::size_t, std::size_t> hist;
    for (node_id i = 0; i < net.node_count(); ++i) ++hist[net.degree(i)];
    return hist;
}

std::map<std::size_t, std::size_t> esp_distribution(const dynamic_network& net) {
    if (net.node_count() == 0) throw empty_network_error("esp_distribution on empty network");
    std::map<std::size_t, std::size_t> hist;
    for (const edge_t& e : net.edges()) ++hist[net.common_neighbor_count(e.u, e.v)];
    return hist;
}

dynamic_network snapshot_at(const std::vector<event_record>& events, double t) {
    double prev = -1.0;
    for (const auto& ev : events) {
        if (ev.time <= prev) throw unsorted_events_error("events not strictly time-sorted");
        prev = ev.time;
    }
    dynamic_network net;
    for (const auto& ev : events) {
        if (ev.time >= t) break; // left-continuity: strictly earlier marks only
        net.apply_mark(ev.time, ev.m);
    }
    return net;
}

dynamic_network replay(const std::vector<event_record>& events) {
    dynamic_network net;
    double prev = -1.0;
    for (const auto& ev : events) {
        if (ev.time <= prev) throw unsorted_events_error("events not strictly time-sorted");
        prev = ev.time;
        net.apply_mark(ev.time, ev.m);
    }
    return net;
}

} // namespace hawkesnet

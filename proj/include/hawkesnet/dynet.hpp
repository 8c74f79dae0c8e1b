#ifndef HAWKESNET_DYNET_HPP
#define HAWKESNET_DYNET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "hawkesnet/errors.hpp"

namespace hawkesnet {

using node_id = std::uint32_t;

// Undirected edge, always stored with u < v.
struct edge_t {
    node_id u;
    node_id v;
    edge_t() : u(0), v(0) {}
    edge_t(node_id a, node_id b) : u(a < b ? a : b), v(a < b ? b : a) {}
    bool operator==(const edge_t& o) const { return u == o.u && v == o.v; }
    bool operator<(const edge_t& o) const { return u != o.u ? u < o.u : v < o.v; }
};

// One network update: the nodes and edges born at a single event time.
// Node labels are dense indices assigned in arrival order; every edge
// endpoint must be an existing node or a member of new_nodes.
struct mark {
    std::vector<node_id> new_nodes;
    std::vector<edge_t> new_edges;
    bool empty() const { return new_nodes.empty() && new_edges.empty(); }
};

struct event_record {
    double time = 0.0;
    mark m;
};

// Growing undirected simple graph with birth times. Nodes and edges are
// never removed, so any earlier snapshot is recoverable from birth times.
// Mutation is single-writer; const access is safe to share across threads.
class dynamic_network {
public:
    std::size_t node_count() const { return node_birth_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_node(node_id i) const { return i < node_birth_.size(); }
    bool has_edge(node_id a, node_id b) const;

    std::size_t degree(node_id i) const { return adj_.at(i).size(); }
    const std::vector<node_id>& neighbors(node_id i) const { return adj_.at(i); }

    double node_birth(node_id i) const { return node_birth_.at(i); }
    double edge_birth(node_id a, node_id b) const;
    double last_birth_time() const { return last_birth_; }

    // Chronological edge list (insertion order).
    const std::vector<edge_t>& edges() const { return edges_; }

    std::size_t common_neighbor_count(node_id a, node_id b) const;

    // Validates the whole mark first, then applies it; on error the
    // network is left untouched.
    void apply_mark(double t, const mark& m);

private:
    std::vector<double> node_birth_;
    std::vector<std::vector<node_id>> adj_; // sorted neighbor lists
    std::vector<edge_t> edges_;
    std::vector<double> edge_birth_;        // parallel to edges_
    std::unordered_map<std::uint64_t, std::size_t> edge_index_;
    double last_birth_ = -1.0;

    static std::uint64_t edge_key(node_id u, node_id v) {
        return (static_cast<std::uint64_t>(u) << 32) | v;
    }
};

// --- change statistics ------------------------------------------------

struct change_stat_vector {
    std::vector<std::string> names;
    std::vector<double> values;
};

// Delta of one named statistic when edge (u,v) is added to net. Node ids
// >= node_count() denote pending new nodes and count as isolated
// degree-0 nodes.
using change_stat_fn = double (*)(const dynamic_network&, node_id, node_id);

// Open registry: edges, triangles, twostar, threestar by default.
// Hyphenated aliases ("2-star", "3-star") are accepted on lookup.
const std::map<std::string, change_stat_fn>& change_stat_registry();
void register_change_stat(const std::string& name, change_stat_fn fn);
change_stat_fn lookup_change_stat(const std::string& name);

change_stat_vector change_statistics(const dynamic_network& net, edge_t candidate,
                                     const std::vector<std::string>& stats);

// Fills values[k] = delta of stats[k]; fns resolved once by the caller.
void change_statistics_into(const dynamic_network& net, node_id a, node_id b,
                            const std::vector<change_stat_fn>& fns, double* values);

// --- whole-network statistics ------------------------------------------

// node_count, mean_degree_centrality, mean_betweenness, mean_closeness
// (harmonic convention on disconnected graphs), mean_eigenvector,
// global_clustering, mean_local_clustering. Centralities are normalized
// for network size; isolated nodes contribute 0 local clustering.
std::map<std::string, double> summary_statistics(const dynamic_network& net);

std::map<std::size_t, std::size_t> degree_distribution(const dynamic_network& net);

// Edgewise shared partners: per edge, the number of common neighbors of
// its endpoints. Sums to the edge count.
std::map<std::size_t, std::size_t> esp_distribution(const dynamic_network& net);

// Network state just before time t (marks with time strictly below t).
dynamic_network snapshot_at(const std::vector<event_record>& events, double t);

// Replay every event; throws if the list is not strictly time-sorted.
dynamic_network replay(const std::vector<event_record>& events);

} // namespace hawkesnet

#endif

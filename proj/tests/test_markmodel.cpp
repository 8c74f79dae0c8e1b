#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hawkesnet/markmodel.hpp"
#include "oracles.hpp"

using namespace hawkesnet;

namespace {

// Nodes 0,1 born at distinct times, then a connecting pair so both have
// equal degree.
struct fixture {
    dynamic_network net;
    node_aux_table aux;
};

fixture two_connected_nodes(double t0 = 0.0, double t1 = 0.5) {
    fixture f;
    mark a;
    a.new_nodes = {0};
    f.net.apply_mark(t0, a);
    f.aux.add_node(t0);
    mark b;
    b.new_nodes = {1};
    b.new_edges = {{0, 1}};
    f.net.apply_mark(t1, b);
    f.aux.add_node(t1);
    f.aux.note_edges(b, t1);
    return f;
}

// Sum of exp(log_prob_mark) over every possible mark, Poisson tail
// truncated at residual mass `tail`. Candidate sets are enumerated per
// node count k.
double enumerate_total_mass(const mark_model_spec& spec, const dynamic_network& net,
                            const node_aux_table& aux, double t, double tail) {
    const node_id n = static_cast<node_id>(net.node_count());
    long k_max = 0;
    if (spec.family == mark_family::ba) {
        k_max = 1;
    } else {
        double cum = std::exp(log_poisson_pmf(0, spec.lambda_nodes));
        while (1.0 - cum > tail) {
            ++k_max;
            cum += std::exp(log_poisson_pmf(k_max, spec.lambda_nodes));
        }
    }
    double total = 0.0;
    const long k_min = spec.family == mark_family::ba ? 1 : 0;
    for (long k = k_min; k <= k_max; ++k) {
        node_aux_table ext = aux; // fixed aux assignment for hypothetical nodes
        for (long j = 0; j < k; ++j) {
            std::vector<double> pos(std::max(spec.latent_dim, 0), 0.1 * (j + 1));
            ext.add_node(t, j % std::max<std::size_t>(spec.block_probs.size(), 1), pos);
        }
        const auto cands = spec.family == mark_family::ba
                               ? candidate_edges(mark_model_spec{}, net, 1)
                               : candidate_edges(spec, net, k);
        REQUIRE(cands.size() <= 22);
        for (std::uint64_t bits = 0; bits < (1ULL << cands.size()); ++bits) {
            mark m;
            for (long j = 0; j < k; ++j) m.new_nodes.push_back(n + j);
            for (std::size_t c = 0; c < cands.size(); ++c)
                if (bits & (1ULL << c)) m.new_edges.push_back(cands[c]);
            total += std::exp(log_prob_mark(spec, net, ext, t, m));
        }
    }
    return total;
}

} // namespace

TEST_CASE("ba edge probabilities") {
    SUBCASE("symmetry") {
        auto f = two_connected_nodes(0.0, 0.0 + 1e-9);
        const auto p = ba_edge_probs(f.net, f.aux, 2.0, 0.0);
        CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("proportional to degree when tau is 0") {
        // star: degree(0)=3, leaves degree 1
        dynamic_network net;
        node_aux_table aux;
        mark m;
        m.new_nodes = {0, 1, 2, 3};
        m.new_edges = {{0, 1}, {0, 2}, {0, 3}};
        net.apply_mark(1.0, m);
        for (int i = 0; i < 4; ++i) aux.add_node(1.0);
        const auto p = ba_edge_probs(net, aux, 2.0, 0.0);
        CHECK(p[0] / p[1] == doctest::Approx(3.0));
        CHECK(p[0] + p[1] + p[2] + p[3] == doctest::Approx(1.0));
    }
    SUBCASE("decay ratio for equal degrees") {
        auto f = two_connected_nodes(0.0, 1.0);
        const auto p = ba_edge_probs(f.net, f.aux, 2.0, 0.5);
        CHECK(p[0] / p[1] == doctest::Approx(std::exp(-1.0) / std::exp(-0.5)));
        CHECK(p[0] + p[1] == doctest::Approx(1.0));
    }
    SUBCASE("uniform fallback when all degrees are zero") {
        dynamic_network net;
        node_aux_table aux;
        mark m;
        m.new_nodes = {0, 1, 2};
        net.apply_mark(1.0, m);
        for (int i = 0; i < 3; ++i) aux.add_node(1.0);
        const auto p = ba_edge_probs(net, aux, 2.0, 1.0);
        for (double v : p) CHECK(v == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("empty network rejected") {
        dynamic_network net;
        node_aux_table aux;
        CHECK_THROWS_AS(ba_edge_probs(net, aux, 1.0, 0.5), empty_network_error);
    }
}

TEST_CASE("ba probabilities are invariant to a global time shift") {
    auto f1 = two_connected_nodes(0.0, 1.0);
    auto f2 = two_connected_nodes(10.0, 11.0);
    const auto p1 = ba_edge_probs(f1.net, f1.aux, 3.0, 0.7);
    const auto p2 = ba_edge_probs(f2.net, f2.aux, 13.0, 0.7);
    CHECK(p1[0] == doctest::Approx(p2[0]).epsilon(1e-12));
    CHECK(p1[1] == doctest::Approx(p2[1]).epsilon(1e-12));
}

TEST_CASE("ba argmax follows decayed degree") {
    rng_t rng = make_rng(9);
    const auto net = oracles::erdos_renyi(10, 0.3, rng);
    node_aux_table aux;
    for (int i = 0; i < 10; ++i) aux.add_node(uniform_range(rng, 0.0, 1.0));
    const double t = 2.0, tau = 0.8;
    const auto p = ba_edge_probs(net, aux, t, tau);
    std::size_t argmax_p = 0, argmax_w = 0;
    double best_w = -1.0;
    for (node_id i = 0; i < 10; ++i) {
        if (p[i] > p[argmax_p]) argmax_p = i;
        const double w = std::exp(-tau * (t - aux.activity(i))) * net.degree(i);
        if (w > best_w) { best_w = w; argmax_w = i; }
    }
    CHECK(argmax_p == argmax_w);
}

TEST_CASE("cs edge probabilities") {
    auto f = two_connected_nodes(0.0, 1.0);
    mark_model_spec spec = mark_model_spec::defaults(mark_family::cs);
    spec.stats = {"edges"};

    SUBCASE("logistic(0) at zero linear predictor and no decay") {
        spec.theta = {0.0};
        spec.tau = 0.0;
        spec.nu = 0.0;
        // theta^T C = 0 requires theta = 0; decay 1 at t = t_i
        const auto cands = candidate_edges(spec, f.net, 1);
        const auto probs = cs_edge_probs(f.net, f.aux, 1.0 + 1e-12, spec, cands);
        // (0,1) already an edge, so candidates are (0,2) and (1,2)
        REQUIRE(probs.size() == 2);
        for (const auto& c : probs) CHECK(c.prob == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("edges-only coefficient -6") {
        spec.theta = {-6.0};
        spec.tau = 0.0;
        const auto cands = candidate_edges(spec, f.net, 1);
        const auto probs = cs_edge_probs(f.net, f.aux, 1.0, spec, cands);
        for (const auto& c : probs)
            CHECK(c.prob == doctest::Approx(logistic(-6.0)).epsilon(1e-9));
    }
    SUBCASE("nu floor survives full decay") {
        spec.theta = {0.0};
        spec.tau = 500.0;
        spec.nu = 0.5;
        const auto cands = candidate_edges(spec, f.net, 0); // old-old pairs only
        REQUIRE(cands.empty()); // both pairs adjacent? no: only (0,1) exists
        // use a bigger net so an old-old candidate exists
        mark m;
        m.new_nodes = {2};
        f.net.apply_mark(2.0, m);
        f.aux.add_node(2.0);
        const auto cands2 = candidate_edges(spec, f.net, 0);
        REQUIRE(cands2.size() == 2);
        const auto probs = cs_edge_probs(f.net, f.aux, 100.0, spec, cands2);
        for (const auto& c : probs) CHECK(c.prob == doctest::Approx(0.25).epsilon(1e-6));
    }
}

TEST_CASE("sbm edge probabilities") {
    auto f = two_connected_nodes(0.0, 1.0);
    f.aux.set_community(0, 0);
    f.aux.set_community(1, 1);
    mark_model_spec spec = mark_model_spec::defaults(mark_family::sbm);
    spec.block_matrix = {{0.8, 0.1}, {0.1, 0.8}};

    SUBCASE("within and cross community, no decay") {
        spec.tau = 0.0;
        const auto p = sbm_edge_probs(f.net, f.aux, 1.0, spec, 0);
        CHECK(p[0] == doctest::Approx(0.8));
        CHECK(p[1] == doctest::Approx(0.1));
    }
    SUBCASE("unit decay step") {
        spec.tau = 1.0;
        const auto p = sbm_edge_probs(f.net, f.aux, 1.0, spec, 0);
        CHECK(p[0] == doctest::Approx(0.8 * std::exp(-1.0)));
    }
    SUBCASE("missing community") {
        node_aux_table bare;
        bare.add_node(0.0);
        bare.add_node(1.0);
        CHECK_THROWS_AS(sbm_edge_probs(f.net, bare, 2.0, spec, 0), missing_community_error);
        CHECK_THROWS_AS(sbm_edge_probs(f.net, f.aux, 2.0, spec, -1), missing_community_error);
    }
}

TEST_CASE("ls edge probabilities") {
    mark_model_spec spec = mark_model_spec::defaults(mark_family::ls);
    spec.latent_dim = 2;
    dynamic_network net;
    node_aux_table aux(activity_mode::arrival, 2);
    mark m;
    m.new_nodes = {0};
    net.apply_mark(1.0, m);
    const std::vector<double> origin{0.0, 0.0};
    aux.add_node(1.0, -1, origin);

    SUBCASE("coincident positions") {
        spec.tau = 0.0;
        spec.theta = {-1.0};
        const auto p = ls_edge_probs(net, aux, 1.0, spec, origin);
        CHECK(p[0] == doctest::Approx(0.5));
    }
    SUBCASE("distance two") {
        spec.tau = 0.0;
        spec.theta = {-1.0};
        const std::vector<double> far{2.0, 0.0};
        const auto p = ls_edge_probs(net, aux, 1.0, spec, far);
        CHECK(p[0] == doctest::Approx(logistic(-2.0)));
    }
    SUBCASE("decay limit") {
        spec.tau = 1e6;
        spec.theta = {-1.0};
        const auto p = ls_edge_probs(net, aux, 2.0, spec, origin);
        CHECK(p[0] == doctest::Approx(0.0));
    }
    SUBCASE("missing position") {
        node_aux_table bare(activity_mode::arrival, 0);
        bare.add_node(1.0);
        CHECK_THROWS_AS(ls_edge_probs(net, bare, 2.0, spec, origin), missing_position_error);
    }
}

TEST_CASE("sample_mark basics") {
    SUBCASE("ba on empty history adds node 0 and nothing else") {
        mark_model_spec spec = mark_model_spec::defaults(mark_family::ba);
        dynamic_network net;
        node_aux_table aux;
        rng_t rng = make_rng(1);
        const mark m = sample_mark(spec, net, aux, 1.0, rng);
        REQUIRE(m.new_nodes.size() == 1);
        CHECK(m.new_nodes[0] == 0);
        CHECK(m.new_edges.empty());
        CHECK(aux.size() == 1);
    }
    SUBCASE("cs with saturated negative edges coefficient yields node-only marks") {
        mark_model_spec spec = mark_model_spec::defaults(mark_family::cs);
        spec.stats = {"edges"};
        spec.theta = {-20.0};
        spec.lambda_nodes = 1.0;
        auto f = two_connected_nodes();
        rng_t rng = make_rng(2);
        int edges = 0;
        for (int i = 0; i < 2000; ++i) {
            node_aux_table aux = f.aux;
            const mark m = sample_mark(spec, f.net, aux, 2.0, rng);
            edges += static_cast<int>(m.new_edges.size());
        }
        CHECK(edges == 0);
    }
    SUBCASE("empty marks are possible and valid") {
        mark_model_spec spec = mark_model_spec::defaults(mark_family::sbm);
        spec.lambda_nodes = 0.0;
        auto f = two_connected_nodes();
        f.aux.set_community(0, 0);
        f.aux.set_community(1, 0);
        rng_t rng = make_rng(3);
        const mark m = sample_mark(spec, f.net, f.aux, 2.0, rng);
        CHECK(m.empty());
        CHECK(log_prob_mark(spec, f.net, f.aux, 2.0, m, 0.0) == doctest::Approx(0.0));
    }
}

TEST_CASE("sampling frequencies match analytic probabilities") {
    // star with unequal degrees: candidate probabilities differ per node
    dynamic_network net;
    node_aux_table aux;
    mark m;
    m.new_nodes = {0, 1, 2, 3};
    m.new_edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}};
    net.apply_mark(1.0, m);
    for (int i = 0; i < 4; ++i) aux.add_node(1.0);
    aux.note_edges(m, 1.0);

    mark_model_spec spec = mark_model_spec::defaults(mark_family::ba);
    spec.tau = 0.3;
    const double t = 2.5;
    const auto p = ba_edge_probs(net, aux, t, spec.tau);

    const int draws = 100000;
    std::vector<int> hits(4, 0);
    rng_t rng = make_rng(99);
    for (int d = 0; d < draws; ++d) {
        node_aux_table scratch = aux;
        const mark sampled = sample_mark(spec, net, scratch, t, rng);
        for (const auto& e : sampled.new_edges) ++hits[e.u];
    }
    for (int i = 0; i < 4; ++i) {
        const double se = std::sqrt(p[i] * (1.0 - p[i]) / draws);
        CHECK(std::fabs(hits[i] / double(draws) - p[i]) < 3.0 * se + 1e-12);
    }
}

TEST_CASE("log_prob_mark direct values") {
    SUBCASE("two candidates at one half each") {
        auto f = two_connected_nodes(0.0, 1e-9);
        mark_model_spec spec = mark_model_spec::defaults(mark_family::ba);
        spec.tau = 0.0;
        mark m;
        m.new_nodes = {2};
        m.new_edges = {{0, 2}};
        const double lp = log_prob_mark(spec, f.net, f.aux, 2.0, m);
        CHECK(lp == doctest::Approx(std::log(0.25)).epsilon(1e-9));
    }
    SUBCASE("zero-probability edge flags and returns -inf") {
        // node 2 isolated: p = 0 under ba weights
        dynamic_network net;
        node_aux_table aux;
        mark base;
        base.new_nodes = {0, 1, 2};
        base.new_edges = {{0, 1}};
        net.apply_mark(1.0, base);
        for (int i = 0; i < 3; ++i) aux.add_node(1.0);
        aux.note_edges(base, 1.0);

        mark_model_spec spec = mark_model_spec::defaults(mark_family::ba);
        mark m;
        m.new_nodes = {3};
        m.new_edges = {{2, 3}};
        mark_diagnostics diag;
        const double lp = log_prob_mark(spec, net, aux, 2.0, m, -1.0, &diag);
        CHECK(lp == -std::numeric_limits<double>::infinity());
        CHECK(diag.zero_likelihood_edges == 1);
    }
    SUBCASE("structurally invalid marks throw") {
        auto f = two_connected_nodes();
        mark_model_spec spec = mark_model_spec::defaults(mark_family::cs);
        mark dup;
        dup.new_edges = {{0, 1}};
        CHECK_THROWS_AS(log_prob_mark(spec, f.net, f.aux, 2.0, dup), invalid_mark_error);
        mark self_loop;
        self_loop.new_nodes = {2};
        self_loop.new_edges = {edge_t(2, 2)};
        CHECK_THROWS_AS(log_prob_mark(spec, f.net, f.aux, 2.0, self_loop), invalid_mark_error);
        mark gap;
        gap.new_nodes = {5};
        CHECK_THROWS_AS(log_prob_mark(spec, f.net, f.aux, 2.0, gap), invalid_mark_error);
    }
}

TEST_CASE("mark mass sums to one for every family") {
    auto f = two_connected_nodes(0.0, 0.6);
    f.aux.set_community(0, 0);
    f.aux.set_community(1, 1);

    SUBCASE("ba") {
        mark_model_spec spec = mark_model_spec::defaults(mark_family::ba);
        spec.tau = 0.4;
        CHECK(enumerate_total_mass(spec, f.net, f.aux, 2.0, 1e-12) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("cs all pairs") {
        mark_model_spec spec = mark_model_spec::defaults(mark_family::cs);
        spec.lambda_nodes = 0.01;
        spec.tau = 0.4;
        CHECK(enumerate_total_mass(spec, f.net, f.aux, 2.0, 1e-12) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("sbm") {
        mark_model_spec spec = mark_model_spec::defaults(mark_family::sbm);
        spec.lambda_nodes = 0.05;
        spec.tau = 0.2;
        CHECK(enumerate_total_mass(spec, f.net, f.aux, 2.0, 1e-12) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("ls") {
        mark_model_spec spec = mark_model_spec::defaults(mark_family::ls);
        spec.lambda_nodes = 0.05;
        spec.tau = 0.2;
        node_aux_table aux(activity_mode::arrival, spec.latent_dim);
        const std::vector<double> p0{0.0, 0.0}, p1{1.0, -0.5};
        aux.add_node(0.0, -1, p0);
        aux.add_node(0.6, -1, p1);
        CHECK(enumerate_total_mass(spec, f.net, aux, 2.0, 1e-12) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("sampled mark frequencies agree with log_prob_mark (chi-square)") {
    // ba over 4 old nodes: 16 possible marks
    dynamic_network net;
    node_aux_table aux;
    mark base;
    base.new_nodes = {0, 1, 2, 3};
    base.new_edges = {{0, 1}, {1, 2}, {2, 3}};
    net.apply_mark(1.0, base);
    for (int i = 0; i < 4; ++i) aux.add_node(1.0);
    aux.note_edges(base, 1.0);

    mark_model_spec spec = mark_model_spec::defaults(mark_family::ba);
    spec.tau = 0.2;
    const double t = 2.0;

    std::vector<double> expected(16, 0.0);
    for (std::uint64_t bits = 0; bits < 16; ++bits) {
        mark m;
        m.new_nodes = {4};
        for (int c = 0; c < 4; ++c)
            if (bits & (1ULL << c)) m.new_edges.emplace_back(static_cast<node_id>(c), 4);
        expected[bits] = std::exp(log_prob_mark(spec, net, aux, t, m));
    }

    const int draws = 100000;
    std::vector<int> observed(16, 0);
    rng_t rng = make_rng(123);
    for (int d = 0; d < draws; ++d) {
        node_aux_table scratch = aux;
        const mark m = sample_mark(spec, net, scratch, t, rng);
        std::uint64_t bits = 0;
        for (const auto& e : m.new_edges) bits |= (1ULL << e.u);
        ++observed[bits];
    }

    double chi2 = 0.0;
    int dof = 0;
    for (int c = 0; c < 16; ++c) {
        const double exp_count = expected[c] * draws;
        if (exp_count < 5.0) continue; // standard cell pooling threshold
        chi2 += (observed[c] - exp_count) * (observed[c] - exp_count) / exp_count;
        ++dof;
    }
    const double p = oracles::chi2_sf(chi2, dof - 1);
    CHECK(p > 0.001);
}

TEST_CASE("apply_event keeps net and aux in lockstep") {
    mark_model_spec spec = mark_model_spec::defaults(mark_family::ba);
    dynamic_network net;
    node_aux_table aux(activity_mode::last_edge);
    event_record e1;
    e1.time = 1.0;
    e1.m.new_nodes = {0};
    apply_event(net, aux, e1);
    event_record e2;
    e2.time = 2.0;
    e2.m.new_nodes = {1};
    e2.m.new_edges = {{0, 1}};
    apply_event(net, aux, e2);
    CHECK(aux.size() == net.node_count());
    CHECK(aux.activity(0) == doctest::Approx(2.0)); // last-edge mode refreshed node 0
    CHECK(aux.arrival(0) == doctest::Approx(1.0));
}

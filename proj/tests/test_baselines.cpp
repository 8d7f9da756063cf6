#include "doctest.h"

#include "ppgsl/baselines.hpp"
#include "ppgsl/graph.hpp"

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

using namespace ppgsl;

namespace {

// The shape every baseline consumes: a visible graph whose sensitive pairs
// have already been carved out.
MaskedGraph masked_er(int n, double avg_deg, uint64_t seed) {
    const Graph truth = generate_erdos_renyi(n, avg_deg, seed);
    return mask_sensitive(truth, 0.1, seed + 1);
}

std::unordered_set<NodePair> pair_set(const std::vector<NodePair>& v) {
    return {v.begin(), v.end()};
}

// deleted = edges of g missing from p, added = the reverse
std::pair<int64_t, int64_t> count_edits(const Graph& g, const Graph& p) {
    int64_t deleted = 0, added = 0;
    for (const Edge& e : edge_list(g))
        if (!p.has_edge(e.u, e.v)) ++deleted;
    for (const Edge& e : edge_list(p))
        if (!g.has_edge(e.u, e.v)) ++added;
    return {deleted, added};
}

}  // namespace

TEST_CASE("random perturbation makes exactly the requested edits") {
    const MaskedGraph m = masked_er(80, 8.0, 5);
    const auto sens = pair_set(m.splits.sensitive);

    for (int64_t edits : {0ll, 5ll, 40ll}) {
        const PerturbResult r = random_perturb(m.visible, m.splits, edits, 17);
        CHECK(r.deleted == edits);
        CHECK(r.added == edits);
        const auto [del, add] = count_edits(m.visible, r.published);
        CHECK(del == edits);
        CHECK(add == edits);
        CHECK(num_edges(r.published) == num_edges(m.visible));

        for (const Edge& e : edge_list(r.published)) {
            CHECK(!sens.count(NodePair(e.u, e.v)));  // hidden pairs stay hidden
            CHECK(e.w == 1.0);
        }
        validate_graph(r.published);
    }

    const PerturbResult a = random_perturb(m.visible, m.splits, 20, 99);
    const PerturbResult b = random_perturb(m.visible, m.splits, 20, 99);
    const PerturbResult c = random_perturb(m.visible, m.splits, 20, 100);
    CHECK((Matrix(a.published.adjacency) - Matrix(b.published.adjacency)).norm() == 0.0);
    CHECK((Matrix(a.published.adjacency) - Matrix(c.published.adjacency)).norm() != 0.0);

    CHECK_THROWS_AS(random_perturb(m.visible, m.splits, num_edges(m.visible) + 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(random_perturb(m.visible, m.splits, -1, 1), std::invalid_argument);
}

TEST_CASE("targeted perturbation works the sensitive neighborhoods") {
    const MaskedGraph m = masked_er(80, 8.0, 7);
    std::unordered_set<int> sens_nodes;
    for (const NodePair& p : m.splits.sensitive) {
        sens_nodes.insert(p.u);
        sens_nodes.insert(p.v);
    }
    REQUIRE(!sens_nodes.empty());

    const int64_t edits = 15;
    const PerturbResult r = dice_perturb(m.visible, m.splits, edits, 21);
    CHECK(r.deleted == edits);
    CHECK(r.added == edits);

    for (const Edge& e : edge_list(m.visible)) {
        if (!r.published.has_edge(e.u, e.v)) {
            // every deletion touches a node involved in some hidden pair
            CHECK((sens_nodes.count(e.u) || sens_nodes.count(e.v)));
        }
    }
    for (const Edge& e : edge_list(r.published)) {
        if (!m.visible.has_edge(e.u, e.v)) {
            // additions steer clear of those nodes entirely
            CHECK(!sens_nodes.count(e.u));
            CHECK(!sens_nodes.count(e.v));
        }
    }
    validate_graph(r.published);

    const PerturbResult again = dice_perturb(m.visible, m.splits, edits, 21);
    CHECK((Matrix(r.published.adjacency) - Matrix(again.published.adjacency)).norm() == 0.0);

    // more deletions than edges touching sensitive endpoints cannot be honored
    int64_t touching = 0;
    for (const Edge& e : edge_list(m.visible))
        if (sens_nodes.count(e.u) || sens_nodes.count(e.v)) ++touching;
    CHECK_THROWS_AS(dice_perturb(m.visible, m.splits, touching + 1, 1), std::invalid_argument);
}

TEST_CASE("randomized response flips pairs at the advertised rate") {
    const MaskedGraph m = masked_er(60, 6.0, 9);
    const auto sens = pair_set(m.splits.sensitive);
    const double epsilon = 2.0;
    const double p_flip = 1.0 / (1.0 + std::exp(epsilon));

    const PerturbResult r = edgerand_perturb(m.visible, m.splits, epsilon, 31);
    validate_graph(r.published);
    for (const Edge& e : edge_list(r.published)) CHECK(!sens.count(NodePair(e.u, e.v)));

    // count realized flips over the non-sensitive pairs and compare to the
    // binomial expectation; the seed is fixed so this is a one-time draw
    const int n = m.visible.n;
    int64_t flips = 0, pairs = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (sens.count(NodePair(u, v))) continue;
            ++pairs;
            if (m.visible.has_edge(u, v) != r.published.has_edge(u, v)) ++flips;
        }
    }
    const double mean = p_flip * static_cast<double>(pairs);
    const double sigma = std::sqrt(static_cast<double>(pairs) * p_flip * (1.0 - p_flip));
    CHECK(std::abs(static_cast<double>(flips) - mean) < 3.0 * sigma);
    CHECK(r.deleted + r.added == flips);

    const PerturbResult again = edgerand_perturb(m.visible, m.splits, epsilon, 31);
    CHECK((Matrix(r.published.adjacency) - Matrix(again.published.adjacency)).norm() == 0.0);

    CHECK_THROWS_AS(edgerand_perturb(m.visible, m.splits, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(edgerand_perturb(m.visible, m.splits, -1.0, 1), std::invalid_argument);
}

TEST_CASE("a tighter privacy budget flips more pairs") {
    const MaskedGraph m = masked_er(60, 6.0, 11);
    const PerturbResult loose = edgerand_perturb(m.visible, m.splits, 6.0, 41);
    const PerturbResult tight = edgerand_perturb(m.visible, m.splits, 0.5, 41);
    CHECK(tight.deleted + tight.added > loose.deleted + loose.added);
}

TEST_CASE("degree-preserving noise publishes the noised edge count") {
    const MaskedGraph m = masked_er(70, 7.0, 13);
    const auto sens = pair_set(m.splits.sensitive);

    const PerturbResult r = lapgraph_perturb(m.visible, m.splits, 1.0, 9.0, 51);
    validate_graph(r.published);
    for (const Edge& e : edge_list(r.published)) CHECK(!sens.count(NodePair(e.u, e.v)));

    // the published count is |E| - deleted + added by construction
    CHECK(num_edges(r.published) == num_edges(m.visible) - r.deleted + r.added);
    const auto [del, add] = count_edits(m.visible, r.published);
    CHECK(del == r.deleted);
    CHECK(add == r.added);

    // with a generous count budget the noised total stays within a few scales
    // of the true count (Laplace scale 1, so 60 is far beyond any plausible draw)
    CHECK(std::abs(num_edges(r.published) - num_edges(m.visible)) < 60);

    const PerturbResult again = lapgraph_perturb(m.visible, m.splits, 1.0, 9.0, 51);
    CHECK((Matrix(r.published.adjacency) - Matrix(again.published.adjacency)).norm() == 0.0);
    const PerturbResult moved = lapgraph_perturb(m.visible, m.splits, 1.0, 9.0, 52);
    CHECK((Matrix(r.published.adjacency) - Matrix(moved.published.adjacency)).norm() != 0.0);

    CHECK_THROWS_AS(lapgraph_perturb(m.visible, m.splits, 0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(lapgraph_perturb(m.visible, m.splits, 1.0, -1.0, 1), std::invalid_argument);
}

TEST_CASE("heavy weight noise scrambles which pairs get published") {
    const MaskedGraph m = masked_er(70, 7.0, 15);
    // weight budget near zero: ranking is dominated by noise, so the overlap
    // with the true edge set should be far from perfect
    const PerturbResult noisy = lapgraph_perturb(m.visible, m.splits, 5.0, 0.01, 61);
    const auto [del, add] = count_edits(m.visible, noisy.published);
    CHECK(del + add > 0);

    // generous weight budget: the original edges dominate the ranking
    const PerturbResult faithful = lapgraph_perturb(m.visible, m.splits, 5.0, 50.0, 61);
    const auto [del2, add2] = count_edits(m.visible, faithful.published);
    CHECK(del2 + add2 < del + add);
}

TEST_CASE("pairwise baselines refuse oversized graphs") {
    // both mechanisms enumerate every unordered pair, so they are capped
    const Graph big = generate_erdos_renyi(9000, 2.0, 17);
    DataSplits splits;
    CHECK_THROWS_AS(edgerand_perturb(big, splits, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(lapgraph_perturb(big, splits, 0.1, 0.9, 1), std::invalid_argument);
}

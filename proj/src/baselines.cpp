#include "ppgsl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "ppgsl/rng.hpp"

namespace ppgsl {

namespace {

// Randomized response and the Laplace mechanism iterate all unordered pairs.
constexpr int kPairwiseMaxNodes = 8192;

void check_inputs(const Graph& g, const DataSplits& splits, const char* where) {
    validate_graph(g);
    for (const NodePair& s : splits.sensitive)
        if (g.has_edge(s.u, s.v))
            throw std::invalid_argument(std::string(where) +
                                        ": sensitive pair is present in the input graph");
}

std::unordered_set<NodePair> pair_set(const std::vector<NodePair>& v) {
    return std::unordered_set<NodePair>(v.begin(), v.end());
}

// Kept edges minus deletions, plus additions at weight 1, wrapped as a graph
// with the input's features and labels.
PerturbResult assemble(const Graph& g, const std::unordered_set<NodePair>& deleted,
                       const std::vector<NodePair>& added) {
    std::vector<Edge> edges;
    for (const Edge& e : edge_list(g))
        if (!deleted.count(NodePair(e.u, e.v))) edges.push_back(e);
    for (const NodePair& q : added) edges.push_back({q.u, q.v, 1.0});

    PerturbResult r;
    r.published.n = g.n;
    r.published.adjacency = adjacency_from_edges(g.n, edges);
    r.published.features = g.features;
    r.published.labels = g.labels;
    r.deleted = static_cast<std::int64_t>(deleted.size());
    r.added = static_cast<std::int64_t>(added.size());
    return r;
}

}  // namespace

PerturbResult random_perturb(const Graph& g, const DataSplits& splits, std::int64_t edits,
                             std::uint64_t seed) {
    check_inputs(g, splits, "random_perturb");
    if (edits < 0) throw std::invalid_argument("random_perturb: edits must be >= 0");

    const std::vector<Edge> edges = edge_list(g);
    if (edits > static_cast<std::int64_t>(edges.size()))
        throw std::invalid_argument("random_perturb: asked to delete " + std::to_string(edits) +
                                    " edges but the graph has " + std::to_string(edges.size()));

    RngStream del_rng = RngStream::derive(seed, "random_del");
    const auto picked =
        sample_without_replacement(edges, static_cast<std::size_t>(edits), del_rng);
    std::unordered_set<NodePair> deleted;
    for (const Edge& e : picked) deleted.insert(NodePair(e.u, e.v));

    RngStream add_rng = RngStream::derive(seed, "random_add");
    const std::vector<NodePair> added = sample_non_adjacent_pairs(
        g.adjacency, static_cast<std::size_t>(edits), add_rng, pair_set(splits.sensitive));

    return assemble(g, deleted, added);
}

PerturbResult dice_perturb(const Graph& g, const DataSplits& splits, std::int64_t edits,
                           std::uint64_t seed) {
    check_inputs(g, splits, "dice_perturb");
    if (edits < 0) throw std::invalid_argument("dice_perturb: edits must be >= 0");
    if (splits.sensitive.empty())
        throw std::invalid_argument("dice_perturb: no sensitive pairs to disguise");

    std::vector<char> is_sensitive_node(g.n, 0);
    for (const NodePair& s : splits.sensitive) {
        is_sensitive_node[s.u] = 1;
        is_sensitive_node[s.v] = 1;
    }

    std::vector<Edge> del_pool;
    for (const Edge& e : edge_list(g))
        if (is_sensitive_node[e.u] || is_sensitive_node[e.v]) del_pool.push_back(e);
    if (edits > static_cast<std::int64_t>(del_pool.size()))
        throw std::invalid_argument("dice_perturb: only " + std::to_string(del_pool.size()) +
                                    " edges touch a sensitive endpoint, cannot delete " +
                                    std::to_string(edits));

    RngStream del_rng = RngStream::derive(seed, "dice_del");
    const auto picked =
        sample_without_replacement(del_pool, static_cast<std::size_t>(edits), del_rng);
    std::unordered_set<NodePair> deleted;
    for (const Edge& e : picked) deleted.insert(NodePair(e.u, e.v));

    // additions: absent pairs whose endpoints both avoid every sensitive pair
    RngStream add_rng = RngStream::derive(seed, "dice_add");
    std::unordered_set<NodePair> chosen;
    std::vector<NodePair> added;
    const std::uint64_t attempts = 50 * static_cast<std::uint64_t>(edits) + 1000;
    const auto n = static_cast<std::uint64_t>(g.n);
    for (std::uint64_t t = 0; t < attempts && added.size() < static_cast<std::size_t>(edits); ++t) {
        const int u = static_cast<int>(add_rng.uniform_int(n));
        const int v = static_cast<int>(add_rng.uniform_int(n));
        if (u == v || is_sensitive_node[u] || is_sensitive_node[v]) continue;
        const NodePair q(u, v);
        if (g.has_edge(q.u, q.v) || chosen.count(q)) continue;
        chosen.insert(q);
        added.push_back(q);
    }
    if (added.size() < static_cast<std::size_t>(edits)) {
        // rejection starved; enumerate what is actually available
        added.clear();
        std::vector<NodePair> pool;
        for (int u = 0; u < g.n; ++u) {
            if (is_sensitive_node[u]) continue;
            for (int v = u + 1; v < g.n; ++v)
                if (!is_sensitive_node[v] && !g.has_edge(u, v)) pool.emplace_back(u, v);
        }
        if (static_cast<std::int64_t>(pool.size()) < edits)
            throw std::invalid_argument("dice_perturb: only " + std::to_string(pool.size()) +
                                        " eligible absent pairs, cannot add " +
                                        std::to_string(edits));
        added = sample_without_replacement(pool, static_cast<std::size_t>(edits), add_rng);
    }
    std::sort(added.begin(), added.end());

    return assemble(g, deleted, added);
}

PerturbResult edgerand_perturb(const Graph& g, const DataSplits& splits, double epsilon,
                               std::uint64_t seed) {
    check_inputs(g, splits, "edgerand_perturb");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("edgerand_perturb: epsilon must be finite and > 0");
    if (g.n > kPairwiseMaxNodes)
        throw std::invalid_argument("edgerand_perturb: requires n <= " +
                                    std::to_string(kPairwiseMaxNodes));

    const double p_flip = 1.0 / (1.0 + std::exp(epsilon));
    const std::unordered_set<NodePair> sensitive = pair_set(splits.sensitive);

    RngStream rng = RngStream::derive(seed, "edgerand");
    std::vector<Edge> edges;
    std::int64_t deleted = 0, added = 0;
    for (int u = 0; u < g.n; ++u) {
        for (int v = u + 1; v < g.n; ++v) {
            // one draw per pair, consumed even when the outcome is forced, so
            // the stream position never depends on the sensitive set
            const bool flip = rng.uniform01() < p_flip;
            const bool present = g.has_edge(u, v);
            if (sensitive.count(NodePair(u, v))) continue;
            const bool keep = present != flip;
            if (keep) edges.push_back({u, v, 1.0});
            if (present && !keep) ++deleted;
            if (!present && keep) ++added;
        }
    }

    PerturbResult r;
    r.published.n = g.n;
    r.published.adjacency = adjacency_from_edges(g.n, edges);
    r.published.features = g.features;
    r.published.labels = g.labels;
    r.deleted = deleted;
    r.added = added;
    return r;
}

PerturbResult lapgraph_perturb(const Graph& g, const DataSplits& splits, double eps_count,
                               double eps_weight, std::uint64_t seed) {
    check_inputs(g, splits, "lapgraph_perturb");
    if (!(eps_count > 0.0) || !(eps_weight > 0.0) || !std::isfinite(eps_count) ||
        !std::isfinite(eps_weight))
        throw std::invalid_argument("lapgraph_perturb: epsilons must be finite and > 0");
    if (g.n > kPairwiseMaxNodes)
        throw std::invalid_argument("lapgraph_perturb: requires n <= " +
                                    std::to_string(kPairwiseMaxNodes));

    const std::unordered_set<NodePair> sensitive = pair_set(splits.sensitive);

    std::vector<NodePair> cands;
    cands.reserve(static_cast<std::size_t>(g.n) * (g.n - 1) / 2 - sensitive.size());
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            if (!sensitive.count(NodePair(u, v))) cands.emplace_back(u, v);

    RngStream count_rng = RngStream::derive(seed, "lapgraph_count");
    const double noisy = static_cast<double>(num_edges(g)) + count_rng.laplace(1.0 / eps_count);
    const auto m_hat = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(noisy), 0, static_cast<long long>(cands.size())));

    RngStream noise_rng = RngStream::derive(seed, "lapgraph_noise");
    std::vector<double> value(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i)
        value[i] = g.weight(cands[i].u, cands[i].v) + noise_rng.laplace(1.0 / eps_weight);

    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto rank = [&](std::size_t a, std::size_t b) {
        if (value[a] != value[b]) return value[a] > value[b];
        return cands[a] < cands[b];  // candidates were built in ascending pair order
    };
    if (m_hat < order.size())
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m_hat),
                         order.end(), rank);
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m_hat), rank);

    std::vector<Edge> edges;
    edges.reserve(m_hat);
    for (std::size_t i = 0; i < m_hat; ++i) {
        const NodePair q = cands[order[i]];
        edges.push_back({q.u, q.v, 1.0});
    }

    PerturbResult r;
    r.published.n = g.n;
    r.published.adjacency = adjacency_from_edges(g.n, edges);
    r.published.features = g.features;
    r.published.labels = g.labels;

    std::unordered_set<NodePair> pub;
    for (const Edge& e : edges) pub.insert(NodePair(e.u, e.v));
    for (const Edge& e : edge_list(g))
        if (!pub.count(NodePair(e.u, e.v))) ++r.deleted;
    r.added = static_cast<std::int64_t>(m_hat) -
              (static_cast<std::int64_t>(num_edges(g)) - r.deleted);
    return r;
}

}  // namespace ppgsl

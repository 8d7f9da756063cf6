#pragma once

#include <cstdint>

#include "ppgsl/graph.hpp"
#include "ppgsl/types.hpp"

namespace ppgsl {

struct PerturbResult {
    Graph published;
    std::int64_t deleted = 0;
    std::int64_t added = 0;
};

// Deletes `edits` uniformly chosen edges and adds `edits` uniformly chosen
// absent pairs (never a sensitive pair). Throws when the graph cannot supply
// that many of either.
PerturbResult random_perturb(const Graph& g, const DataSplits& splits, std::int64_t edits,
                             std::uint64_t seed);

// Targeted variant: deletions are drawn from edges touching a sensitive
// endpoint, additions connect two nodes that touch no sensitive pair.
PerturbResult dice_perturb(const Graph& g, const DataSplits& splits, std::int64_t edits,
                           std::uint64_t seed);

// Randomized response on every unordered pair: each indicator flips with
// probability 1/(1 + e^epsilon); sensitive pairs are forced absent. Touches
// all n*(n-1)/2 pairs, so it is capped to moderate n.
PerturbResult edgerand_perturb(const Graph& g, const DataSplits& splits, double epsilon,
                               std::uint64_t seed);

// Laplace mechanism: a noised edge count (scale 1/eps_count) fixes how many
// pairs to publish; per-pair noised weights (scale 1/eps_weight) rank the
// candidates, ties broken by pair order. Sensitive pairs are not candidates.
PerturbResult lapgraph_perturb(const Graph& g, const DataSplits& splits, double eps_count,
                               double eps_weight, std::uint64_t seed);

}  // namespace ppgsl

#pragma once

#include <cstdint>

#include "ppgsl/attack_model.hpp"
#include "ppgsl/graph.hpp"
#include "ppgsl/types.hpp"

namespace ppgsl {

// Link prediction utility: train a link predictor on the published graph and
// score the held-out test edges against the test negatives. Higher is better
// for the data consumer. cfg.seed drives the predictor's streams.
double linkpred_auc(const Graph& published, const DataSplits& splits,
                    const AttackTrainConfig& cfg);

struct NodeClassConfig {
    int hidden = 64;
    int epochs = 200;
    double lr = 0.01;
    std::uint64_t seed = 0;
};

struct NodeClassResult {
    double micro_f1 = 0.0;  // equals accuracy for single-label classification
    double macro_f1 = 0.0;  // unweighted mean over every class in the label set
};

// Two-layer GCN classifier trained with softmax cross-entropy on the split's
// train nodes; scores are reported on the complement. Requires labels.
NodeClassResult nodeclass_eval(const Graph& published, const DataSplits& splits,
                               const NodeClassConfig& cfg);

struct DistortionReport {
    double distortion = 0.0;     // squared Frobenius norm of the adjacency difference
    std::int64_t deleted = 0;    // edges of the original absent from the published graph
    std::int64_t added = 0;      // published edges absent from the original
};

DistortionReport distortion_report(const Graph& original, const Graph& published);

}  // namespace ppgsl

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ppgsl/attack_model.hpp"
#include "ppgsl/graph.hpp"
#include "ppgsl/types.hpp"

namespace ppgsl {

// Classic common-neighborhood link predictors. A node counts as a neighbor
// when the stored weight is positive, so explicit zeros never contribute.
enum class HeuristicKind { CommonNeighbors, AdamicAdar, ResourceAllocation };

// "cn", "aa", "ra"
std::string heuristic_name(HeuristicKind h);
// "embed_cos", "embed_ip", "embed_mlp"
std::string embed_method_name(HeadKind head);

// CN: |common neighbors|. AA: sum over common neighbors w of 1/ln(deg(w)).
// RA: sum of 1/deg(w). Degrees count positive-weight neighbors. Sums run in
// ascending neighbor order, so results are bitwise stable.
double heuristic_score(const SpMat& a, HeuristicKind h, int u, int v);
std::vector<double> heuristic_scores(const SpMat& a, HeuristicKind h,
                                     const std::vector<NodePair>& pairs);

// Mann-Whitney ROC-AUC with the half-credit tie rule, computed from integer
// rank counts. Exactly satisfies roc_auc(p, n) + roc_auc(n, p) == 1.
// Throws std::invalid_argument on empty or non-finite input.
double roc_auc(const std::vector<double>& pos, const std::vector<double>& neg);

struct AttackResult {
    std::string method;
    std::vector<double> pos_scores;  // sensitive pairs, canonical order
    std::vector<double> neg_scores;  // evaluation negatives, canonical order
    double auc = 0.0;
    std::shared_ptr<AttackModel> model;  // embedding attacks only
};

// Scores the sensitive pairs against the evaluation negatives using only the
// published graph's structure.
AttackResult heuristic_attack(const Graph& published, const DataSplits& splits,
                              HeuristicKind h);

// Trains a fresh link inference model on the published graph (the attacker
// sees nothing else) and scores the same pair sets with the given head.
// cfg.head and cfg.seed are overridden by the head/seed arguments.
AttackResult embedding_attack(const Graph& published, const DataSplits& splits,
                              HeadKind head, AttackTrainConfig cfg, std::uint64_t seed);

// All six attacks in fixed order: cn, aa, ra, embed_cos, embed_ip, embed_mlp.
// Each embedding attack gets its own stream derived from (seed, method name).
std::vector<AttackResult> run_attack_suite(const Graph& published, const DataSplits& splits,
                                           const AttackTrainConfig& base, std::uint64_t seed);

}  // namespace ppgsl

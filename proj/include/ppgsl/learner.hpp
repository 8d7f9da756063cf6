#pragma once

#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ppgsl/attack_model.hpp"
#include "ppgsl/graph.hpp"
#include "ppgsl/types.hpp"

namespace ppgsl {

// How the learnable adjacency is parameterized.
//
// Sparse: one parameter per candidate pair (original edges plus k*|E| sampled
// non-edges); everything off the candidate set stays structurally zero.
// Full: a dense n x n parameter block; every off-diagonal non-sensitive pair
// is in play. Memory is n^2 doubles, so this mode is gated to small n.
enum class LearnerMode { Sparse, Full };

LearnerMode learner_mode_from_string(const std::string& s);
std::string to_string(LearnerMode mode);

struct GraphLearner {
    LearnerMode mode = LearnerMode::Sparse;
    int n = 0;
    double k = 0.0;
    // Sparse mode: sorted canonical pairs, theta[i] parameterizes candidates[i]
    // (both mirrored adjacency entries). Empty in full mode.
    std::vector<NodePair> candidates;
    // Pairs that must never be published (the protected links).
    std::unordered_set<NodePair> sensitive;
    // Sparse: |candidates| entries. Full: n*n entries, column-major, where the
    // symmetrized (theta + theta^T)/2 defines the adjacency.
    Vector theta;

    Eigen::Index param_count() const { return theta.size(); }
};

// Warm-started learner: theta reproduces the visible adjacency exactly, with
// k*|E| additional non-edge candidates at zero (sparse mode). Candidate
// sampling excludes existing edges, sensitive pairs, and self loops.
// Throws std::invalid_argument if any sensitive pair is present in g, or if
// the graph has too few absent pairs to fill the candidate budget.
GraphLearner init_learner(const Graph& g, LearnerMode mode, double k,
                          const DataSplits& splits, std::uint64_t seed);

// A' = clamp((theta + theta^T)/2, 0, 1) restricted to candidate pairs.
// Candidate entries are kept even when the clamped weight is zero, so the
// sparsity pattern (and thus downstream sampling order) is stable across
// epochs. Full mode zeroes the diagonal and sensitive pairs.
SpMat materialize(const GraphLearner& p);

// Mean binary cross-entropy toward "no edge" on the sensitive pairs, under
// the attack model's link predictions on the candidate graph.
double privacy_loss(const AttackModel& m, const SpMat& a_prime, const NodeFeatures& x,
                    const std::vector<NodePair>& sensitive);

// Squared Frobenius distance between the visible and candidate adjacencies
// (both triangles counted).
double utility_loss(const SpMat& a, const SpMat& a_prime);

double learner_loss(const AttackModel& m, const SpMat& a, const SpMat& a_prime,
                    const NodeFeatures& x, const std::vector<NodePair>& sensitive,
                    double alpha);

struct LearnerStep {
    double privacy = 0.0;
    double utility = 0.0;
    double total = 0.0;
    Vector grad;  // same layout as GraphLearner::theta
};

// Loss and d(loss)/d(theta) from one forward pass. The clamp in materialize is
// treated straight-through: gradients pass the boundary unmodified. Mirrored
// entries each contribute d(A'_ij)/d(theta_ij) = 1/2, so a sparse candidate
// parameter (which drives both mirrors) sees twice the symmetrized adjacency
// gradient, while a full-mode entry sees it once.
LearnerStep learner_loss_and_grad(const AttackModel& m, const SpMat& a, const SpMat& a_prime,
                                  const NodeFeatures& x, const std::vector<NodePair>& sensitive,
                                  double alpha, const GraphLearner& p);

Vector learner_grad(const AttackModel& m, const SpMat& a, const SpMat& a_prime,
                    const NodeFeatures& x, const std::vector<NodePair>& sensitive,
                    double alpha, const GraphLearner& p);

// One Bernoulli draw per stored unordered pair, in canonical (u, v) order:
// pair (u, v) with weight w becomes an edge iff u01 < w. Weights outside
// [0, 1] are rejected. Deterministic for a given seed.
SpMat discretize(const SpMat& a_prime, std::uint64_t seed);

// Method metadata carried alongside a published graph. `params` keeps the
// method-specific knobs in a fixed order so serialized output is stable.
struct Provenance {
    std::string method;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> params;
};

struct PublishedGraph {
    Graph graph;
    Provenance provenance;
};

}  // namespace ppgsl

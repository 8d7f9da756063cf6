#pragma once

#include "ppgsl/gcn.hpp"
#include "ppgsl/graph.hpp"
#include "ppgsl/numkit.hpp"
#include "ppgsl/rng.hpp"
#include "ppgsl/types.hpp"

#include <string>
#include <vector>

namespace ppgsl {

enum class HeadKind { Cosine, InnerProduct, Mlp };

HeadKind head_kind_from_string(const std::string& s);
std::string to_string(HeadKind k);

struct GcnEncoder {
    Matrix w1;  // d x h1
    Matrix w2;  // h1 x h2
};

struct PredictionHead {
    HeadKind kind = HeadKind::Cosine;
    double cosine_temp = 5.0;  // raw cosine lives in [-1,1]; scaled before the sigmoid
    Matrix mlp_hidden;         // 2*h2 x m, MLP head only
    Vector mlp_out;            // m
};

// The link inference model: GCN encoder plus a similarity head that maps an
// embedding pair to a link probability.
struct AttackModel {
    GcnEncoder encoder;
    PredictionHead head;

    Eigen::Index input_dim() const { return encoder.w1.rows(); }
    Eigen::Index embed_dim() const { return encoder.w2.cols(); }
};

struct AttackTrainConfig {
    int hidden1 = 128;
    int hidden2 = 64;
    HeadKind head = HeadKind::Cosine;
    double cosine_temp = 5.0;
    int mlp_hidden_dim = 32;
    int epochs = 500;             // N1
    double lr = 0.01;             // eta1
    int samples_per_epoch = -1;   // -1: all edges, capped below
    int max_positive_samples = 20000;
    uint64_t seed = 0;
};

AttackModel init_attack_model(Eigen::Index input_dim, const AttackTrainConfig& cfg,
                              RngStream& rng);

// Z = A_hat relu(A_hat X W1) W2. Normalizes internally; rejects non-finite output.
Matrix encode(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x);
Matrix encode(const AttackModel& m, const SpMat& adjacency, const Matrix& x);

// Link probability from two embedding rows. Symmetric for cosine/IP heads;
// the MLP head concatenates in argument order, so callers pass canonical pairs.
double predict_link(const AttackModel& m, const Vector& z_i, const Vector& z_j);

// One probability per pair from a trained model; pure.
std::vector<double> infer(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x,
                          const std::vector<NodePair>& pairs);

// A pair-set loss: mean BCE against per-pair targets over `positives` plus
// mean BCE against 0 over `negatives`. Either batch may be empty, not both.
// When targets_track_adjacency is set, positive targets are re-read from the
// adjacency being evaluated (the attack loss fits the current edge weights, so
// its adjacency gradient has a target term).
struct PairLossSpec {
    std::vector<NodePair> positives;
    std::vector<double> positive_targets;
    std::vector<NodePair> negatives;
    bool targets_track_adjacency = false;
};

// Attack loss (targets = current edge weights) -- empty positives is an error.
PairLossSpec attack_loss_spec(const SpMat& adjacency, const std::vector<NodePair>& positives,
                              const std::vector<NodePair>& negatives);
// Privacy loss: push sensitive pairs toward probability 0.
PairLossSpec privacy_loss_spec(const std::vector<NodePair>& sensitive);

double pair_loss(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x,
                 const PairLossSpec& spec);

// Attack objective: mean BCE(predict, w_ij) over positives plus
// mean BCE(predict, 0) over negatives.
double attack_loss(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x,
                   const std::vector<NodePair>& positives,
                   const std::vector<NodePair>& negatives);

struct WeightGrads {
    Matrix w1, w2;
    Matrix mlp_hidden;  // empty unless MLP head
    Vector mlp_out;
    double loss = 0.0;
};

WeightGrads loss_grad_wrt_weights(const AttackModel& m, const SpMat& adjacency,
                                  const NodeFeatures& x, const PairLossSpec& spec);

// dLoss/dA in the symmetrized convention of gcn_backward_adjacency_dense,
// with the normalization degrees differentiated. Dense output; small graphs.
// loss_out, when given, receives the loss from the same forward pass.
Matrix loss_grad_wrt_adjacency(const AttackModel& m, const SpMat& adjacency,
                               const NodeFeatures& x, const PairLossSpec& spec,
                               double* loss_out = nullptr);

// Same gradient, evaluated only at `pairs`; scales to large sparse graphs.
std::vector<double> loss_grad_at_pairs(const AttackModel& m, const SpMat& adjacency,
                                       const NodeFeatures& x, const PairLossSpec& spec,
                                       const std::vector<NodePair>& pairs,
                                       double* loss_out = nullptr);

struct TrainedAttack {
    AttackModel model;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    uint64_t init_checksum = 0;  // fingerprint of the fresh draw, pre-training
};

// Trains a freshly initialized model for cfg.epochs epochs of Adam on the
// attack loss. Positives are the current edges (a uniform sample when the
// graph exceeds the cap); negatives are resampled every epoch with matching
// count. Never warm-started.
TrainedAttack train_attack(const SpMat& adjacency, const NodeFeatures& x,
                           const AttackTrainConfig& cfg);
// Stream-level variant so an orchestrator can hand out per-retrain streams.
TrainedAttack train_attack_with_streams(const SpMat& adjacency, const NodeFeatures& x,
                                        const AttackTrainConfig& cfg, RngStream init_rng,
                                        RngStream sample_rng);

// Flat parameter count of a model (what an AdamState for it must be sized to).
Eigen::Index attack_param_count(const AttackModel& m);

// Additional Adam epochs on an existing model, for co-training protocols that
// never reinitialize. Optimizer state persists across calls and the adjacency
// may change between them. Returns the last pre-step loss; initial_loss_out,
// when given, receives the first epoch's pre-step loss.
double continue_attack_training(AttackModel& m, AdamState& opt, const SpMat& adjacency,
                                const NodeFeatures& x, const AttackTrainConfig& cfg,
                                RngStream& sample_rng, int epochs,
                                double* initial_loss_out = nullptr);

// Versioned JSON checkpoint; exact round-trip (shortest round-trip decimals).
void save_attack_model(const std::string& path, const AttackModel& m);
AttackModel load_attack_model(const std::string& path);

// Bitwise fingerprint over all weights.
uint64_t model_checksum(const AttackModel& m);

}  // namespace ppgsl

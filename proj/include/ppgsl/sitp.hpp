#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ppgsl/attack_model.hpp"
#include "ppgsl/graph.hpp"
#include "ppgsl/learner.hpp"
#include "ppgsl/types.hpp"

namespace ppgsl {

struct SitpConfig {
    LearnerMode mode = LearnerMode::Sparse;
    double alpha = 0.005;  // utility weight; larger keeps the graph closer to the input
    double k = 1.0;        // non-edge candidate budget, as a multiple of |E|
    int mu = 50;           // attack retraining period, in learner epochs
    int n1 = 500;          // attack epochs per (re)training
    int n2 = 500;          // learner epochs
    double eta1 = 0.01;    // attack learning rate
    double eta2 = 0.5;     // learner learning rate
    HeadKind head = HeadKind::Cosine;
    double cosine_temp = 5.0;
    int attack_hidden1 = 128;
    int attack_hidden2 = 64;
    int mlp_hidden_dim = 32;
    int max_positive_samples = 20000;
    std::uint64_t seed = 0;
    // When > 0, every eval_every-th epoch additionally measures attack AUC and
    // link prediction AUC on a discretized snapshot (slow; off by default).
    int eval_every = 0;
    // Plain adversarial co-training instead of periodic reinitialization: the
    // attack is initialized once and gets one training epoch per learner epoch.
    bool adversarial = false;
};

struct TraceRow {
    int epoch = 0;
    double learner_loss = 0.0;
    double privacy_loss = 0.0;
    double utility_loss = 0.0;
    bool retrained_attack = false;
    double wall_time = 0.0;  // seconds since training started, monotone
    // NaN unless periodic evaluation ran this epoch.
    double attack_auc = std::numeric_limits<double>::quiet_NaN();
    double linkpred_auc = std::numeric_limits<double>::quiet_NaN();
};

struct TrainTrace {
    std::vector<TraceRow> rows;  // exactly n2 rows, epochs 0..n2-1
    std::vector<std::uint64_t> attack_init_checksums;
    double total_seconds = 0.0;
};

struct SitpResult {
    PublishedGraph published;
    SpMat soft_adjacency;  // final materialized weights, pre-discretization
    TrainTrace trace;
};

// True when a fresh attack model is trained before the learner step at this
// epoch (epoch 0 always retrains).
bool retrain_due(int epoch, int mu);

// Alternates attack training and learner updates on the visible graph:
// materialize the candidate adjacency, retrain the attack from scratch every
// mu epochs, take one Adam step on the learner against the current attack,
// and finally discretize. Deterministic for a given config.
SitpResult run_sitp(const Graph& visible, const DataSplits& splits, const SitpConfig& cfg);

struct ConvergenceReport {
    double first_decile_mean = 0.0;
    double last_decile_mean = 0.0;
    bool converged = false;          // last decile strictly below the first
    std::vector<int> jump_epochs;    // upward loss jumps above the threshold
    bool jumps_only_at_retrains = true;
};

// Summarizes a trace: decile means of the learner loss and where the loss
// jumped upward. Retraining the attack may legitimately raise the loss, so
// jumps are checked against the retrain flags.
ConvergenceReport convergence_report(const TrainTrace& trace, double jump_threshold = 0.1);

// CSV with one row per epoch. Empty cells encode the NaN of skipped
// evaluations; everything else round-trips exactly.
void save_trace_csv(const std::string& path, const TrainTrace& trace);
TrainTrace load_trace_csv(const std::string& path);

}  // namespace ppgsl

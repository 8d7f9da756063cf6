#include "ppgsl/sitp.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ppgsl/attacks.hpp"
#include "ppgsl/rng.hpp"
#include "ppgsl/utility.hpp"

namespace ppgsl {

namespace {

void validate_config(const SitpConfig& cfg) {
    if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha))
        throw std::invalid_argument("sitp: alpha must be finite and >= 0");
    if (cfg.mu < 1) throw std::invalid_argument("sitp: mu must be >= 1");
    if (cfg.n1 < 1 || cfg.n2 < 1) throw std::invalid_argument("sitp: n1 and n2 must be >= 1");
    if (!(cfg.eta1 > 0.0) || !(cfg.eta2 > 0.0))
        throw std::invalid_argument("sitp: learning rates must be > 0");
    if (cfg.eval_every < 0) throw std::invalid_argument("sitp: eval_every must be >= 0");
}

AttackTrainConfig attack_config(const SitpConfig& cfg) {
    AttackTrainConfig a;
    a.hidden1 = cfg.attack_hidden1;
    a.hidden2 = cfg.attack_hidden2;
    a.head = cfg.head;
    a.cosine_temp = cfg.cosine_temp;
    a.mlp_hidden_dim = cfg.mlp_hidden_dim;
    a.epochs = cfg.n1;
    a.lr = cfg.eta1;
    a.max_positive_samples = cfg.max_positive_samples;
    return a;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

bool retrain_due(int epoch, int mu) {
    if (mu < 1) throw std::invalid_argument("retrain_due: mu must be >= 1");
    return epoch % mu == 0;
}

SitpResult run_sitp(const Graph& visible, const DataSplits& splits, const SitpConfig& cfg) {
    validate_config(cfg);
    if (splits.sensitive.empty())
        throw std::invalid_argument("sitp: no sensitive pairs to protect");

    GraphLearner learner = init_learner(visible, cfg.mode, cfg.k, splits, cfg.seed);
    const NodeFeatures x = effective_features(visible);
    const AttackTrainConfig acfg = attack_config(cfg);

    AdamState learner_opt(learner.theta.size());
    AttackModel attack;
    AdamState attack_opt(0);
    RngStream adv_samples = RngStream::derive(cfg.seed, "attack_neg_adv");
    int retrain_count = 0;

    SitpResult out;
    out.trace.rows.reserve(cfg.n2);

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    for (int e2 = 0; e2 < cfg.n2; ++e2) {
        const SpMat a_prime = materialize(learner);

        bool retrained = false;
        if (!cfg.adversarial) {
            if (retrain_due(e2, cfg.mu)) {
                TrainedAttack ta = train_attack_with_streams(
                    a_prime, x, acfg,
                    RngStream::derive(cfg.seed, "attack_init", static_cast<std::uint64_t>(retrain_count)),
                    RngStream::derive(cfg.seed, "attack_neg", static_cast<std::uint64_t>(retrain_count)));
                attack = std::move(ta.model);
                out.trace.attack_init_checksums.push_back(ta.init_checksum);
                ++retrain_count;
                retrained = true;
            }
        } else {
            if (e2 == 0) {
                RngStream init = RngStream::derive(cfg.seed, "attack_init", 0);
                attack = init_attack_model(x.cols(), acfg, init);
                out.trace.attack_init_checksums.push_back(model_checksum(attack));
                attack_opt = AdamState(attack_param_count(attack));
                continue_attack_training(attack, attack_opt, a_prime, x, acfg, adv_samples, cfg.n1);
                retrained = true;
            } else {
                continue_attack_training(attack, attack_opt, a_prime, x, acfg, adv_samples, 1);
            }
        }

        const LearnerStep step = learner_loss_and_grad(attack, visible.adjacency, a_prime, x,
                                                       splits.sensitive, cfg.alpha, learner);
        if (!std::isfinite(step.total))
            throw std::runtime_error("sitp: learner loss diverged at epoch " + std::to_string(e2));

        TraceRow row;
        row.epoch = e2;
        row.learner_loss = step.total;
        row.privacy_loss = step.privacy;
        row.utility_loss = step.utility;
        row.retrained_attack = retrained;

        if (cfg.eval_every > 0 && e2 % cfg.eval_every == 0) {
            const std::uint64_t es = RngStream::derive_seed(cfg.seed, "eval", static_cast<std::uint64_t>(e2));
            Graph snap = visible;
            snap.adjacency = discretize(a_prime, es);
            row.attack_auc = embedding_attack(snap, splits, HeadKind::Cosine, acfg,
                                              RngStream::derive_seed(es, "attack")).auc;
            AttackTrainConfig lp = acfg;
            lp.head = HeadKind::Cosine;
            lp.seed = RngStream::derive_seed(es, "linkpred");
            row.linkpred_auc = linkpred_auc(snap, splits, lp);
        }

        row.wall_time = elapsed();
        out.trace.rows.push_back(row);

        adam_step(learner.theta, step.grad, learner_opt, cfg.eta2);
    }

    out.soft_adjacency = materialize(learner);
    SpMat published_adj = discretize(out.soft_adjacency, cfg.seed);
    published_adj.makeCompressed();
    for (const NodePair& s : splits.sensitive)
        if (published_adj.coeff(s.u, s.v) != 0.0)
            throw std::logic_error("sitp: sensitive pair leaked into the published graph");

    out.published.graph.n = visible.n;
    out.published.graph.adjacency = std::move(published_adj);
    out.published.graph.features = visible.features;
    out.published.graph.labels = visible.labels;

    Provenance& prov = out.published.provenance;
    prov.method = cfg.adversarial ? "ppgsl-adv" : "ppgsl";
    prov.seed = cfg.seed;
    prov.params = {
        {"mode", to_string(cfg.mode)},
        {"alpha", fmt(cfg.alpha)},
        {"k", fmt(cfg.k)},
        {"mu", std::to_string(cfg.mu)},
        {"n1", std::to_string(cfg.n1)},
        {"n2", std::to_string(cfg.n2)},
        {"eta1", fmt(cfg.eta1)},
        {"eta2", fmt(cfg.eta2)},
        {"head", to_string(cfg.head)},
    };

    out.trace.total_seconds = elapsed();
    return out;
}

ConvergenceReport convergence_report(const TrainTrace& trace, double jump_threshold) {
    const auto& rows = trace.rows;
    if (rows.empty()) throw std::invalid_argument("convergence_report: empty trace");

    const std::size_t decile = std::max<std::size_t>(1, rows.size() / 10);
    ConvergenceReport r;
    for (std::size_t i = 0; i < decile; ++i) r.first_decile_mean += rows[i].learner_loss;
    for (std::size_t i = rows.size() - decile; i < rows.size(); ++i)
        r.last_decile_mean += rows[i].learner_loss;
    r.first_decile_mean /= static_cast<double>(decile);
    r.last_decile_mean /= static_cast<double>(decile);
    r.converged = r.last_decile_mean < r.first_decile_mean;

    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].learner_loss - rows[i - 1].learner_loss > jump_threshold) {
            r.jump_epochs.push_back(rows[i].epoch);
            if (!rows[i].retrained_attack) r.jumps_only_at_retrains = false;
        }
    }
    return r;
}

void save_trace_csv(const std::string& path, const TrainTrace& trace) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "epoch,learner_loss,privacy_loss,utility_loss,retrained_attack,wall_time,"
         "attack_auc,linkpred_auc\n";
    for (const TraceRow& r : trace.rows) {
        f << r.epoch << ',' << fmt(r.learner_loss) << ',' << fmt(r.privacy_loss) << ','
          << fmt(r.utility_loss) << ',' << (r.retrained_attack ? 1 : 0) << ','
          << fmt(r.wall_time) << ',';
        if (!std::isnan(r.attack_auc)) f << fmt(r.attack_auc);
        f << ',';
        if (!std::isnan(r.linkpred_auc)) f << fmt(r.linkpred_auc);
        f << '\n';
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

TrainTrace load_trace_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);

    std::string line;
    if (!std::getline(f, line))
        throw std::invalid_argument(path + ": empty trace file");

    TrainTrace trace;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        // a trailing empty cell is dropped by getline; restore it
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (cells.size() != 8)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 8 columns");
        auto num = [&](const std::string& s) {
            return s.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(s);
        };
        TraceRow r;
        r.epoch = std::stoi(cells[0]);
        r.learner_loss = parse_double(cells[1]);
        r.privacy_loss = parse_double(cells[2]);
        r.utility_loss = parse_double(cells[3]);
        r.retrained_attack = cells[4] == "1";
        r.wall_time = parse_double(cells[5]);
        r.attack_auc = num(cells[6]);
        r.linkpred_auc = num(cells[7]);
        trace.rows.push_back(r);
    }
    return trace;
}

}  // namespace ppgsl

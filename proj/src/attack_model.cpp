#include "ppgsl/attack_model.hpp"

#include "ppgsl/numkit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace ppgsl {

using json = nlohmann::json;

HeadKind head_kind_from_string(const std::string& s) {
    if (s == "cosine" || s == "cos") return HeadKind::Cosine;
    if (s == "ip" || s == "inner_product") return HeadKind::InnerProduct;
    if (s == "mlp") return HeadKind::Mlp;
    throw std::invalid_argument("unknown head kind: " + s);
}

std::string to_string(HeadKind k) {
    switch (k) {
        case HeadKind::Cosine: return "cosine";
        case HeadKind::InnerProduct: return "ip";
        case HeadKind::Mlp: return "mlp";
    }
    return "?";
}

AttackModel init_attack_model(Eigen::Index input_dim, const AttackTrainConfig& cfg,
                              RngStream& rng) {
    if (input_dim < 1 || cfg.hidden1 < 1 || cfg.hidden2 < 1)
        throw std::invalid_argument("init_attack_model: bad dimensions");
    AttackModel m;
    m.encoder.w1 = xavier_uniform(input_dim, cfg.hidden1, rng);
    m.encoder.w2 = xavier_uniform(cfg.hidden1, cfg.hidden2, rng);
    m.head.kind = cfg.head;
    m.head.cosine_temp = cfg.cosine_temp;
    if (cfg.head == HeadKind::Mlp) {
        m.head.mlp_hidden = xavier_uniform(2 * cfg.hidden2, cfg.mlp_hidden_dim, rng);
        m.head.mlp_out = xavier_uniform(cfg.mlp_hidden_dim, 1, rng).col(0);
    }
    return m;
}

Matrix encode(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x) {
    const SpMat a_hat = normalize_adjacency(adjacency);
    GcnForward f = gcn_forward(a_hat, x, m.encoder.w1, m.encoder.w2);
    if (!f.z.allFinite()) throw std::runtime_error("encode: non-finite embeddings");
    return std::move(f.z);
}

Matrix encode(const AttackModel& m, const SpMat& adjacency, const Matrix& x) {
    return encode(m, adjacency, NodeFeatures::dense(x));
}

namespace {

// score + caches needed for the backward pass of one pair
struct HeadEval {
    double score = 0.0;
    double p = 0.5;
    Vector mlp_pre, mlp_act;  // MLP head only
};

HeadEval head_forward(const AttackModel& m, const Vector& zi, const Vector& zj) {
    HeadEval e;
    switch (m.head.kind) {
        case HeadKind::Cosine:
            e.score = m.head.cosine_temp * cosine_sim(zi, zj);
            break;
        case HeadKind::InnerProduct:
            e.score = zi.dot(zj);
            break;
        case HeadKind::Mlp: {
            Vector u(zi.size() + zj.size());
            u << zi, zj;
            e.mlp_pre = m.head.mlp_hidden.transpose() * u;
            e.mlp_act = e.mlp_pre.cwiseMax(0.0);
            e.score = m.head.mlp_out.dot(e.mlp_act);
            break;
        }
    }
    e.p = sigmoid(e.score);
    return e;
}

// everything accumulated over one pass of the pair batches
struct PairAccum {
    double loss = 0.0;
    Matrix g_z;                   // dL/dZ
    Matrix d_mlp_hidden;          // MLP head grads (empty otherwise)
    Vector d_mlp_out;
    std::vector<double> d_target; // dL/dtarget per positive, when requested
};

// adds ds_coef * dScore/dz into g_z rows and head param grads
void head_backward(const AttackModel& m, const Vector& zi, const Vector& zj, const HeadEval& e,
                   double ds, int i, int j, PairAccum& acc) {
    switch (m.head.kind) {
        case HeadKind::Cosine: {
            const double ni = zi.norm(), nj = zj.norm();
            if (ni == 0.0 || nj == 0.0) return;  // score fixed at 0, no gradient
            const double cos = zi.dot(zj) / (ni * nj);
            const double tau = m.head.cosine_temp;
            acc.g_z.row(i) += (ds * tau / ni) * (zj.transpose() / nj - cos * zi.transpose() / ni);
            acc.g_z.row(j) += (ds * tau / nj) * (zi.transpose() / ni - cos * zj.transpose() / nj);
            break;
        }
        case HeadKind::InnerProduct:
            acc.g_z.row(i) += ds * zj.transpose();
            acc.g_z.row(j) += ds * zi.transpose();
            break;
        case HeadKind::Mlp: {
            const auto h = zi.size();
            Vector u(2 * h);
            u << zi, zj;
            acc.d_mlp_out += ds * e.mlp_act;
            const Vector d_pre =
                (e.mlp_pre.array() > 0.0).select(ds * m.head.mlp_out, 0.0);
            acc.d_mlp_hidden += u * d_pre.transpose();
            const Vector du = m.head.mlp_hidden * d_pre;
            acc.g_z.row(i) += du.head(h).transpose();
            acc.g_z.row(j) += du.tail(h).transpose();
            break;
        }
    }
}

double bce_target_grad(double p, double) {
    double pc = p;
    if (pc < kBceClamp) pc = kBceClamp;
    if (pc > 1.0 - kBceClamp) pc = 1.0 - kBceClamp;
    return std::log1p(-pc) - std::log(pc);  // d bce / d target
}

PairAccum accumulate_pairs(const AttackModel& m, const Matrix& z, const PairLossSpec& spec,
                           const SpMat* target_source, bool want_target_grads) {
    if (spec.positives.empty() && spec.negatives.empty())
        throw std::invalid_argument("pair loss: both pair sets empty");
    if (!spec.targets_track_adjacency && spec.positive_targets.size() != spec.positives.size())
        throw std::invalid_argument("pair loss: target count != positive count");
    PairAccum acc;
    acc.g_z = Matrix::Zero(z.rows(), z.cols());
    if (m.head.kind == HeadKind::Mlp) {
        acc.d_mlp_hidden = Matrix::Zero(m.head.mlp_hidden.rows(), m.head.mlp_hidden.cols());
        acc.d_mlp_out = Vector::Zero(m.head.mlp_out.size());
    }
    if (want_target_grads) acc.d_target.resize(spec.positives.size(), 0.0);

    const double pos_coef = spec.positives.empty() ? 0.0 : 1.0 / spec.positives.size();
    for (size_t k = 0; k < spec.positives.size(); ++k) {
        const auto [u, v] = spec.positives[k];
        const double target = spec.targets_track_adjacency
                                  ? target_source->coeff(u, v)
                                  : spec.positive_targets[k];
        const Vector zu = z.row(u).transpose(), zv = z.row(v).transpose();
        const HeadEval e = head_forward(m, zu, zv);
        acc.loss += pos_coef * bce(e.p, target);
        head_backward(m, zu, zv, e, pos_coef * (e.p - target), u, v, acc);
        if (want_target_grads) acc.d_target[k] = pos_coef * bce_target_grad(e.p, target);
    }
    const double neg_coef = spec.negatives.empty() ? 0.0 : 1.0 / spec.negatives.size();
    for (const auto& [u, v] : spec.negatives) {
        const Vector zu = z.row(u).transpose(), zv = z.row(v).transpose();
        const HeadEval e = head_forward(m, zu, zv);
        acc.loss += neg_coef * bce(e.p, 0.0);
        head_backward(m, zu, zv, e, neg_coef * e.p, u, v, acc);
    }
    return acc;
}

void check_inputs(const SpMat& adjacency, const NodeFeatures& x) {
    if (adjacency.rows() != adjacency.cols() || adjacency.rows() != x.rows())
        throw std::invalid_argument("attack model: adjacency/feature shape mismatch");
}

}  // namespace

double predict_link(const AttackModel& m, const Vector& z_i, const Vector& z_j) {
    return head_forward(m, z_i, z_j).p;
}

std::vector<double> infer(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x,
                          const std::vector<NodePair>& pairs) {
    if (pairs.empty()) return {};
    const Matrix z = encode(m, adjacency, x);
    std::vector<double> out(pairs.size());
    for (size_t k = 0; k < pairs.size(); ++k)
        out[k] = predict_link(m, z.row(pairs[k].u).transpose(), z.row(pairs[k].v).transpose());
    return out;
}

PairLossSpec attack_loss_spec(const SpMat& adjacency, const std::vector<NodePair>& positives,
                              const std::vector<NodePair>& negatives) {
    if (positives.empty()) throw std::invalid_argument("attack loss: no positive pairs");
    PairLossSpec spec;
    spec.positives = positives;
    spec.positive_targets.reserve(positives.size());
    for (const auto& [u, v] : positives) {
        const double w = adjacency.coeff(u, v);
        if (!(w > 0.0))
            throw std::invalid_argument("attack loss: positive pair (" + std::to_string(u) +
                                        ", " + std::to_string(v) + ") is not an edge");
        spec.positive_targets.push_back(w);
    }
    spec.negatives = negatives;
    spec.targets_track_adjacency = true;
    return spec;
}

PairLossSpec privacy_loss_spec(const std::vector<NodePair>& sensitive) {
    if (sensitive.empty()) throw std::invalid_argument("privacy loss: empty sensitive set");
    PairLossSpec spec;
    spec.negatives = sensitive;
    return spec;
}

double attack_loss(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x,
                   const std::vector<NodePair>& positives,
                   const std::vector<NodePair>& negatives) {
    return pair_loss(m, adjacency, x, attack_loss_spec(adjacency, positives, negatives));
}

double pair_loss(const AttackModel& m, const SpMat& adjacency, const NodeFeatures& x,
                 const PairLossSpec& spec) {
    check_inputs(adjacency, x);
    const SpMat a_hat = normalize_adjacency(adjacency);
    const GcnForward f = gcn_forward(a_hat, x, m.encoder.w1, m.encoder.w2);
    return accumulate_pairs(m, f.z, spec, &adjacency, false).loss;
}

WeightGrads loss_grad_wrt_weights(const AttackModel& m, const SpMat& adjacency,
                                  const NodeFeatures& x, const PairLossSpec& spec) {
    check_inputs(adjacency, x);
    const SpMat a_hat = normalize_adjacency(adjacency);
    const GcnForward f = gcn_forward(a_hat, x, m.encoder.w1, m.encoder.w2);
    PairAccum acc = accumulate_pairs(m, f.z, spec, &adjacency, false);
    GcnWeightGrads wg = gcn_backward_weights(f, x, m.encoder.w2, acc.g_z);
    WeightGrads out;
    out.w1 = std::move(wg.w1);
    out.w2 = std::move(wg.w2);
    out.mlp_hidden = std::move(acc.d_mlp_hidden);
    out.mlp_out = std::move(acc.d_mlp_out);
    out.loss = acc.loss;
    return out;
}

namespace {

// target-tracking positives add d bce/d target to the pair's entry; half per
// mirrored entry in the symmetrized convention
void add_target_terms(const PairLossSpec& spec, const std::vector<double>& d_target,
                      Matrix& g) {
    for (size_t k = 0; k < spec.positives.size(); ++k) {
        const auto [u, v] = spec.positives[k];
        g(u, v) += 0.5 * d_target[k];
        g(v, u) += 0.5 * d_target[k];
    }
}

}  // namespace

Matrix loss_grad_wrt_adjacency(const AttackModel& m, const SpMat& adjacency,
                               const NodeFeatures& x, const PairLossSpec& spec,
                               double* loss_out) {
    check_inputs(adjacency, x);
    Vector deg;
    const SpMat a_hat = normalize_adjacency(adjacency, &deg);
    const GcnForward f = gcn_forward(a_hat, x, m.encoder.w1, m.encoder.w2);
    const bool track = spec.targets_track_adjacency;
    PairAccum acc = accumulate_pairs(m, f.z, spec, &adjacency, track);
    if (loss_out) *loss_out = acc.loss;
    Matrix g = gcn_backward_adjacency_dense(f, deg, m.encoder.w2, acc.g_z);
    if (track) add_target_terms(spec, acc.d_target, g);
    if (!g.allFinite()) throw std::runtime_error("loss_grad_wrt_adjacency: non-finite gradient");
    return g;
}

std::vector<double> loss_grad_at_pairs(const AttackModel& m, const SpMat& adjacency,
                                       const NodeFeatures& x, const PairLossSpec& spec,
                                       const std::vector<NodePair>& pairs,
                                       double* loss_out) {
    check_inputs(adjacency, x);
    Vector deg;
    const SpMat a_hat = normalize_adjacency(adjacency, &deg);
    const GcnForward f = gcn_forward(a_hat, x, m.encoder.w1, m.encoder.w2);
    const bool track = spec.targets_track_adjacency;
    PairAccum acc = accumulate_pairs(m, f.z, spec, &adjacency, track);
    if (loss_out) *loss_out = acc.loss;
    std::vector<double> g =
        gcn_backward_adjacency_at_pairs(f, deg, m.encoder.w2, acc.g_z, pairs);
    if (track) {
        std::unordered_map<NodePair, double> dt;
        dt.reserve(spec.positives.size());
        for (size_t k = 0; k < spec.positives.size(); ++k)
            dt[spec.positives[k]] += 0.5 * acc.d_target[k];
        for (size_t i = 0; i < pairs.size(); ++i) {
            auto it = dt.find(pairs[i]);
            if (it != dt.end()) g[i] += it->second;
        }
    }
    for (double v : g)
        if (!std::isfinite(v)) throw std::runtime_error("loss_grad_at_pairs: non-finite gradient");
    return g;
}

// --- parameter packing (training treats all weights as one flat vector) ---

namespace {

Eigen::Index param_count(const AttackModel& m) {
    Eigen::Index n = m.encoder.w1.size() + m.encoder.w2.size();
    if (m.head.kind == HeadKind::Mlp) n += m.head.mlp_hidden.size() + m.head.mlp_out.size();
    return n;
}

Vector pack_params(const AttackModel& m) {
    Vector p(param_count(m));
    Eigen::Index off = 0;
    auto put = [&](const double* src, Eigen::Index len) {
        std::copy(src, src + len, p.data() + off);
        off += len;
    };
    put(m.encoder.w1.data(), m.encoder.w1.size());
    put(m.encoder.w2.data(), m.encoder.w2.size());
    if (m.head.kind == HeadKind::Mlp) {
        put(m.head.mlp_hidden.data(), m.head.mlp_hidden.size());
        put(m.head.mlp_out.data(), m.head.mlp_out.size());
    }
    return p;
}

void unpack_params(const Vector& p, AttackModel& m) {
    Eigen::Index off = 0;
    auto take = [&](double* dst, Eigen::Index len) {
        std::copy(p.data() + off, p.data() + off + len, dst);
        off += len;
    };
    take(m.encoder.w1.data(), m.encoder.w1.size());
    take(m.encoder.w2.data(), m.encoder.w2.size());
    if (m.head.kind == HeadKind::Mlp) {
        take(m.head.mlp_hidden.data(), m.head.mlp_hidden.size());
        take(m.head.mlp_out.data(), m.head.mlp_out.size());
    }
}

Vector pack_grads(const AttackModel& m, const GcnWeightGrads& wg, const PairAccum& acc) {
    Vector g(param_count(m));
    Eigen::Index off = 0;
    auto put = [&](const double* src, Eigen::Index len) {
        std::copy(src, src + len, g.data() + off);
        off += len;
    };
    put(wg.w1.data(), wg.w1.size());
    put(wg.w2.data(), wg.w2.size());
    if (m.head.kind == HeadKind::Mlp) {
        put(acc.d_mlp_hidden.data(), acc.d_mlp_hidden.size());
        put(acc.d_mlp_out.data(), acc.d_mlp_out.size());
    }
    return g;
}

}  // namespace

Eigen::Index attack_param_count(const AttackModel& m) { return param_count(m); }

double continue_attack_training(AttackModel& m, AdamState& opt, const SpMat& adjacency,
                                const NodeFeatures& x, const AttackTrainConfig& cfg,
                                RngStream& sample_rng, int epochs, double* initial_loss_out) {
    check_inputs(adjacency, x);
    if (epochs < 1) throw std::invalid_argument("attack training: epochs must be >= 1");
    if (opt.m.size() != param_count(m))
        throw std::invalid_argument("attack training: optimizer state size mismatch");

    std::vector<NodePair> all_pos;
    std::vector<double> all_w;
    for (const Edge& e : edge_list(adjacency)) {
        all_pos.emplace_back(e.u, e.v);
        all_w.push_back(e.w);
    }
    if (all_pos.empty()) throw std::invalid_argument("attack training: graph has no edges");

    size_t per_epoch = all_pos.size();
    if (cfg.samples_per_epoch > 0)
        per_epoch = std::min<size_t>(per_epoch, cfg.samples_per_epoch);
    per_epoch = std::min<size_t>(per_epoch, cfg.max_positive_samples);

    Vector params = pack_params(m);

    Vector deg;
    const SpMat a_hat = normalize_adjacency(adjacency, &deg);

    std::vector<size_t> idx(all_pos.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    double last_loss = 0.0;
    PairLossSpec spec;
    spec.targets_track_adjacency = false;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        if (per_epoch == all_pos.size()) {
            spec.positives = all_pos;
            spec.positive_targets = all_w;
        } else {
            auto pick = sample_without_replacement(idx, per_epoch, sample_rng);
            std::sort(pick.begin(), pick.end());
            spec.positives.clear();
            spec.positive_targets.clear();
            for (size_t i : pick) {
                spec.positives.push_back(all_pos[i]);
                spec.positive_targets.push_back(all_w[i]);
            }
        }
        spec.negatives = sample_non_adjacent_pairs(adjacency, spec.positives.size(), sample_rng);

        const GcnForward f = gcn_forward(a_hat, x, m.encoder.w1, m.encoder.w2);
        PairAccum acc = accumulate_pairs(m, f.z, spec, nullptr, false);
        if (!std::isfinite(acc.loss))
            throw std::runtime_error("attack training: loss diverged at epoch " +
                                     std::to_string(epoch));
        if (epoch == 0 && initial_loss_out) *initial_loss_out = acc.loss;
        last_loss = acc.loss;

        const GcnWeightGrads wg = gcn_backward_weights(f, x, m.encoder.w2, acc.g_z);
        const Vector grads = pack_grads(m, wg, acc);
        adam_step(params, grads, opt, cfg.lr);
        unpack_params(params, m);
    }
    return last_loss;
}

TrainedAttack train_attack_with_streams(const SpMat& adjacency, const NodeFeatures& x,
                                        const AttackTrainConfig& cfg, RngStream init_rng,
                                        RngStream sample_rng) {
    check_inputs(adjacency, x);
    TrainedAttack out;
    out.model = init_attack_model(x.cols(), cfg, init_rng);
    out.init_checksum = model_checksum(out.model);
    AdamState st(param_count(out.model));
    out.final_loss = continue_attack_training(out.model, st, adjacency, x, cfg, sample_rng,
                                              cfg.epochs, &out.initial_loss);
    return out;
}

TrainedAttack train_attack(const SpMat& adjacency, const NodeFeatures& x,
                           const AttackTrainConfig& cfg) {
    return train_attack_with_streams(adjacency, x, cfg,
                                     RngStream::derive(cfg.seed, "attack_init"),
                                     RngStream::derive(cfg.seed, "attack_samples"));
}

// --- checkpoint ---

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    const auto r = static_cast<Eigen::Index>(j.size());
    if (r == 0) return Matrix();
    const auto c = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const json& row = j.at(i);
        if (static_cast<Eigen::Index>(row.size()) != c)
            throw std::invalid_argument("checkpoint: ragged weight matrix");
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = row.at(k).get<double>();
    }
    return m;
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void save_attack_model(const std::string& path, const AttackModel& m) {
    json j;
    j["format"] = "ppgsl-attack-model";
    j["version"] = kCheckpointVersion;
    j["head"] = to_string(m.head.kind);
    j["cosine_temp"] = m.head.cosine_temp;
    j["w1"] = matrix_to_json(m.encoder.w1);
    j["w2"] = matrix_to_json(m.encoder.w2);
    if (m.head.kind == HeadKind::Mlp) {
        j["mlp_hidden"] = matrix_to_json(m.head.mlp_hidden);
        json out = json::array();
        for (Eigen::Index i = 0; i < m.head.mlp_out.size(); ++i) out.push_back(m.head.mlp_out[i]);
        j["mlp_out"] = std::move(out);
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(1) << "\n";
    if (!f) throw std::runtime_error("write failed: " + path);
}

AttackModel load_attack_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    json j;
    f >> j;
    if (j.value("format", "") != "ppgsl-attack-model")
        throw std::invalid_argument(path + ": not an attack model checkpoint");
    if (j.value("version", -1) != kCheckpointVersion)
        throw std::invalid_argument(path + ": unsupported checkpoint version");
    AttackModel m;
    m.head.kind = head_kind_from_string(j.at("head").get<std::string>());
    m.head.cosine_temp = j.at("cosine_temp").get<double>();
    m.encoder.w1 = matrix_from_json(j.at("w1"));
    m.encoder.w2 = matrix_from_json(j.at("w2"));
    if (m.head.kind == HeadKind::Mlp) {
        m.head.mlp_hidden = matrix_from_json(j.at("mlp_hidden"));
        const json& out = j.at("mlp_out");
        m.head.mlp_out = Vector(out.size());
        for (size_t i = 0; i < out.size(); ++i) m.head.mlp_out[i] = out.at(i).get<double>();
    }
    return m;
}

uint64_t model_checksum(const AttackModel& m) {
    uint64_t h = checksum(m.encoder.w1);
    h = fnv1a64(m.encoder.w2.data(), sizeof(double) * m.encoder.w2.size(), h);
    if (m.head.kind == HeadKind::Mlp) {
        h = fnv1a64(m.head.mlp_hidden.data(), sizeof(double) * m.head.mlp_hidden.size(), h);
        h = fnv1a64(m.head.mlp_out.data(), sizeof(double) * m.head.mlp_out.size(), h);
    }
    h = fnv1a64(&m.head.cosine_temp, sizeof(double), h);
    const int kind = static_cast<int>(m.head.kind);
    return fnv1a64(&kind, sizeof(kind), h);
}

}  // namespace ppgsl

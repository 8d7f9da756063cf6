#include "ppgsl/utility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "ppgsl/attacks.hpp"
#include "ppgsl/gcn.hpp"
#include "ppgsl/numkit.hpp"
#include "ppgsl/rng.hpp"

namespace ppgsl {

double linkpred_auc(const Graph& published, const DataSplits& splits,
                    const AttackTrainConfig& cfg) {
    if (splits.util_test_pos.empty() || splits.util_test_neg.empty())
        throw std::invalid_argument("linkpred_auc: empty utility test split");
    const NodeFeatures x = effective_features(published);
    const TrainedAttack ta = train_attack(published.adjacency, x, cfg);
    const std::vector<double> pos = infer(ta.model, published.adjacency, x, splits.util_test_pos);
    const std::vector<double> neg = infer(ta.model, published.adjacency, x, splits.util_test_neg);
    return roc_auc(pos, neg);
}

NodeClassResult nodeclass_eval(const Graph& published, const DataSplits& splits,
                               const NodeClassConfig& cfg) {
    if (published.labels.empty())
        throw std::invalid_argument("nodeclass_eval: graph has no labels");
    if (static_cast<int>(published.labels.size()) != published.n)
        throw std::invalid_argument("nodeclass_eval: label count != node count");
    if (splits.train_nodes.empty())
        throw std::invalid_argument("nodeclass_eval: empty train node split");
    if (cfg.epochs < 1 || cfg.hidden < 1 || !(cfg.lr > 0.0))
        throw std::invalid_argument("nodeclass_eval: bad training config");

    int num_classes = 0;
    for (int y : published.labels) {
        if (y < 0) throw std::invalid_argument("nodeclass_eval: negative label");
        num_classes = std::max(num_classes, y + 1);
    }

    std::vector<char> in_train(published.n, 0);
    for (int i : splits.train_nodes) {
        if (i < 0 || i >= published.n)
            throw std::invalid_argument("nodeclass_eval: train node out of range");
        in_train[i] = 1;
    }
    std::vector<int> test_nodes;
    for (int i = 0; i < published.n; ++i)
        if (!in_train[i]) test_nodes.push_back(i);
    if (test_nodes.empty())
        throw std::invalid_argument("nodeclass_eval: train split covers every node");

    const NodeFeatures x = effective_features(published);
    const SpMat a_hat = normalize_adjacency(published.adjacency);

    RngStream init = RngStream::derive(cfg.seed, "nodeclass_init");
    Matrix w1 = xavier_uniform(x.cols(), cfg.hidden, init);
    Matrix w2 = xavier_uniform(cfg.hidden, num_classes, init);

    Vector params(w1.size() + w2.size());
    auto pack = [&] {
        std::copy(w1.data(), w1.data() + w1.size(), params.data());
        std::copy(w2.data(), w2.data() + w2.size(), params.data() + w1.size());
    };
    auto unpack = [&] {
        std::copy(params.data(), params.data() + w1.size(), w1.data());
        std::copy(params.data() + w1.size(), params.data() + params.size(), w2.data());
    };
    pack();
    AdamState opt(params.size());

    const double inv_train = 1.0 / static_cast<double>(splits.train_nodes.size());
    Matrix logits;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const GcnForward f = gcn_forward(a_hat, x, w1, w2);
        logits = f.z;

        Matrix g_z = Matrix::Zero(published.n, num_classes);
        double loss = 0.0;
        for (int i : splits.train_nodes) {
            Vector p = logits.row(i).transpose();
            p.array() -= p.maxCoeff();
            p = p.array().exp();
            p /= p.sum();
            const int y = published.labels[i];
            loss -= std::log(std::max(p[y], kBceClamp));
            p[y] -= 1.0;
            g_z.row(i) = inv_train * p.transpose();
        }
        loss *= inv_train;
        if (!std::isfinite(loss))
            throw std::runtime_error("nodeclass_eval: loss diverged at epoch " +
                                     std::to_string(epoch));

        const GcnWeightGrads wg = gcn_backward_weights(f, x, w2, g_z);
        Vector grads(params.size());
        std::copy(wg.w1.data(), wg.w1.data() + wg.w1.size(), grads.data());
        std::copy(wg.w2.data(), wg.w2.data() + wg.w2.size(), grads.data() + wg.w1.size());
        adam_step(params, grads, opt, cfg.lr);
        unpack();
    }

    // predictions and per-class counts on the held-out nodes
    const GcnForward f = gcn_forward(a_hat, x, w1, w2);
    std::vector<std::int64_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
    std::int64_t correct = 0;
    for (int i : test_nodes) {
        int pred = 0;
        for (int c = 1; c < num_classes; ++c)
            if (f.z(i, c) > f.z(i, pred)) pred = c;  // ties keep the lowest index
        const int y = published.labels[i];
        if (pred == y) {
            ++tp[y];
            ++correct;
        } else {
            ++fp[pred];
            ++fn[y];
        }
    }

    NodeClassResult r;
    r.micro_f1 = static_cast<double>(correct) / static_cast<double>(test_nodes.size());
    double macro = 0.0;
    for (int c = 0; c < num_classes; ++c) {
        const double prec = tp[c] + fp[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fp[c]) : 0.0;
        const double rec = tp[c] + fn[c] > 0 ? static_cast<double>(tp[c]) / (tp[c] + fn[c]) : 0.0;
        macro += prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    }
    r.macro_f1 = macro / static_cast<double>(num_classes);
    return r;
}

DistortionReport distortion_report(const Graph& original, const Graph& published) {
    if (original.n != published.n)
        throw std::invalid_argument("distortion_report: node counts differ");

    DistortionReport r;
    r.distortion = SpMat(original.adjacency - published.adjacency).squaredNorm();

    std::unordered_set<NodePair> orig, pub;
    for (const Edge& e : edge_list(original)) orig.insert(NodePair(e.u, e.v));
    for (const Edge& e : edge_list(published)) pub.insert(NodePair(e.u, e.v));
    for (const NodePair& q : orig)
        if (!pub.count(q)) ++r.deleted;
    for (const NodePair& q : pub)
        if (!orig.count(q)) ++r.added;
    return r;
}

}  // namespace ppgsl

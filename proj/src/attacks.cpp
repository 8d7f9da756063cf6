#include "ppgsl/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ppgsl/rng.hpp"

namespace ppgsl {

namespace {

void check_node(const SpMat& a, int u, const char* where) {
    if (u < 0 || u >= a.rows()) throw std::invalid_argument(std::string(where) + ": node out of range");
}

// Walks the stored entries of columns u and v in ascending row order and
// applies `fn` to each common positive-weight neighbor. Eigen keeps inner
// indices sorted, so this is a plain two-pointer merge.
template <typename Fn>
void for_each_common_neighbor(const SpMat& a, int u, int v, Fn&& fn) {
    SpMat::InnerIterator iu(a, u), iv(a, v);
    while (iu && iv) {
        // skip explicit zeros and the endpoints themselves
        if (iu.value() <= 0.0 || iu.row() == u || iu.row() == v) { ++iu; continue; }
        if (iv.value() <= 0.0 || iv.row() == u || iv.row() == v) { ++iv; continue; }
        if (iu.row() < iv.row()) ++iu;
        else if (iv.row() < iu.row()) ++iv;
        else {
            fn(static_cast<int>(iu.row()));
            ++iu; ++iv;
        }
    }
}

std::vector<int> positive_degrees(const SpMat& a) {
    std::vector<int> deg(a.cols(), 0);
    for (int col = 0; col < a.outerSize(); ++col)
        for (SpMat::InnerIterator it(a, col); it; ++it)
            if (it.value() > 0.0) ++deg[col];
    return deg;
}

}  // namespace

std::string heuristic_name(HeuristicKind h) {
    switch (h) {
        case HeuristicKind::CommonNeighbors: return "cn";
        case HeuristicKind::AdamicAdar: return "aa";
        case HeuristicKind::ResourceAllocation: return "ra";
    }
    throw std::logic_error("unreachable heuristic kind");
}

std::string embed_method_name(HeadKind head) {
    switch (head) {
        case HeadKind::Cosine: return "embed_cos";
        case HeadKind::InnerProduct: return "embed_ip";
        case HeadKind::Mlp: return "embed_mlp";
    }
    throw std::logic_error("unreachable head kind");
}

double heuristic_score(const SpMat& a, HeuristicKind h, int u, int v) {
    check_node(a, u, "heuristic_score");
    check_node(a, v, "heuristic_score");
    const std::vector<int> deg = positive_degrees(a);
    double s = 0.0;
    for_each_common_neighbor(a, u, v, [&](int w) {
        switch (h) {
            case HeuristicKind::CommonNeighbors: s += 1.0; break;
            // a common neighbor has degree >= 2, so ln(deg) > 0
            case HeuristicKind::AdamicAdar: s += 1.0 / std::log(static_cast<double>(deg[w])); break;
            case HeuristicKind::ResourceAllocation: s += 1.0 / static_cast<double>(deg[w]); break;
        }
    });
    return s;
}

std::vector<double> heuristic_scores(const SpMat& a, HeuristicKind h,
                                     const std::vector<NodePair>& pairs) {
    for (const NodePair& q : pairs) {
        check_node(a, q.u, "heuristic_scores");
        check_node(a, q.v, "heuristic_scores");
    }
    const std::vector<int> deg = positive_degrees(a);
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const NodePair& q : pairs) {
        double s = 0.0;
        for_each_common_neighbor(a, q.u, q.v, [&](int w) {
            switch (h) {
                case HeuristicKind::CommonNeighbors: s += 1.0; break;
                case HeuristicKind::AdamicAdar: s += 1.0 / std::log(static_cast<double>(deg[w])); break;
                case HeuristicKind::ResourceAllocation: s += 1.0 / static_cast<double>(deg[w]); break;
            }
        });
        out.push_back(s);
    }
    return out;
}

double roc_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
    if (pos.empty() || neg.empty())
        throw std::invalid_argument("roc_auc: need at least one score on each side");
    for (double s : pos)
        if (!std::isfinite(s)) throw std::invalid_argument("roc_auc: non-finite positive score");
    for (double s : neg)
        if (!std::isfinite(s)) throw std::invalid_argument("roc_auc: non-finite negative score");

    std::vector<double> sn = neg;
    std::sort(sn.begin(), sn.end());

    // s1 accumulates 2*(wins) + (ties): integers, so the statistic is exact
    // until the single final division.
    std::uint64_t s1 = 0;
    for (double p : pos) {
        const auto lo = std::lower_bound(sn.begin(), sn.end(), p);
        const auto hi = std::upper_bound(lo, sn.end(), p);
        s1 += 2 * static_cast<std::uint64_t>(lo - sn.begin());
        s1 += static_cast<std::uint64_t>(hi - lo);
    }
    const std::uint64_t d = 2 * static_cast<std::uint64_t>(pos.size()) *
                            static_cast<std::uint64_t>(neg.size());

    // Round the larger of {auc, 1-auc} and subtract for the other side: the
    // subtraction from 1 is exact in [0.5, 1], so complementing the score
    // lists complements the result exactly.
    if (s1 >= d - s1) return static_cast<double>(s1) / static_cast<double>(d);
    return 1.0 - static_cast<double>(d - s1) / static_cast<double>(d);
}

namespace {

void check_eval_pairs(const DataSplits& splits, const char* where) {
    if (splits.sensitive.empty())
        throw std::invalid_argument(std::string(where) + ": no sensitive pairs to score");
    if (splits.eval_negatives.empty())
        throw std::invalid_argument(std::string(where) + ": no evaluation negatives");
}

}  // namespace

AttackResult heuristic_attack(const Graph& published, const DataSplits& splits,
                              HeuristicKind h) {
    check_eval_pairs(splits, "heuristic_attack");
    AttackResult r;
    r.method = heuristic_name(h);
    r.pos_scores = heuristic_scores(published.adjacency, h, splits.sensitive);
    r.neg_scores = heuristic_scores(published.adjacency, h, splits.eval_negatives);
    r.auc = roc_auc(r.pos_scores, r.neg_scores);
    return r;
}

AttackResult embedding_attack(const Graph& published, const DataSplits& splits,
                              HeadKind head, AttackTrainConfig cfg, std::uint64_t seed) {
    check_eval_pairs(splits, "embedding_attack");
    cfg.head = head;
    cfg.seed = seed;
    const NodeFeatures x = effective_features(published);
    TrainedAttack ta = train_attack(published.adjacency, x, cfg);

    AttackResult r;
    r.method = embed_method_name(head);
    r.pos_scores = infer(ta.model, published.adjacency, x, splits.sensitive);
    r.neg_scores = infer(ta.model, published.adjacency, x, splits.eval_negatives);
    r.auc = roc_auc(r.pos_scores, r.neg_scores);
    r.model = std::make_shared<AttackModel>(std::move(ta.model));
    return r;
}

std::vector<AttackResult> run_attack_suite(const Graph& published, const DataSplits& splits,
                                           const AttackTrainConfig& base, std::uint64_t seed) {
    std::vector<AttackResult> out;
    out.reserve(6);
    for (HeuristicKind h : {HeuristicKind::CommonNeighbors, HeuristicKind::AdamicAdar,
                            HeuristicKind::ResourceAllocation})
        out.push_back(heuristic_attack(published, splits, h));
    for (HeadKind head : {HeadKind::Cosine, HeadKind::InnerProduct, HeadKind::Mlp})
        out.push_back(embedding_attack(published, splits, head, base,
                                       RngStream::derive_seed(seed, embed_method_name(head))));
    return out;
}

}  // namespace ppgsl

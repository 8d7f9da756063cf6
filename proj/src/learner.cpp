#include "ppgsl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "ppgsl/rng.hpp"

namespace ppgsl {

namespace {

// Full mode holds three n x n dense buffers (theta, Adam m, Adam v) plus the
// gradient; past this size the sparse parameterization is the right tool.
constexpr int kFullModeMaxNodes = 2048;

void check_square_match(const SpMat& a, const SpMat& b, const char* where) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument(std::string(where) + ": adjacency shapes disagree");
}

}  // namespace

LearnerMode learner_mode_from_string(const std::string& s) {
    if (s == "sparse") return LearnerMode::Sparse;
    if (s == "full") return LearnerMode::Full;
    throw std::invalid_argument("unknown learner mode '" + s + "' (expected sparse|full)");
}

std::string to_string(LearnerMode mode) {
    return mode == LearnerMode::Sparse ? "sparse" : "full";
}

GraphLearner init_learner(const Graph& g, LearnerMode mode, double k,
                          const DataSplits& splits, std::uint64_t seed) {
    if (!(k >= 0.0) || !std::isfinite(k))
        throw std::invalid_argument("init_learner: k must be finite and >= 0");
    for (const NodePair& s : splits.sensitive)
        if (g.has_edge(s.u, s.v))
            throw std::invalid_argument("init_learner: sensitive pair is present in the input graph");

    GraphLearner p;
    p.mode = mode;
    p.n = g.n;
    p.k = k;
    p.sensitive.insert(splits.sensitive.begin(), splits.sensitive.end());

    if (mode == LearnerMode::Full) {
        if (g.n > kFullModeMaxNodes)
            throw std::invalid_argument("init_learner: full mode requires n <= " +
                                        std::to_string(kFullModeMaxNodes));
        Matrix dense = Matrix(g.adjacency);
        p.theta = Eigen::Map<const Vector>(dense.data(), dense.size());
        return p;
    }

    const std::vector<Edge> edges = edge_list(g);
    const auto budget = static_cast<std::size_t>(std::floor(k * static_cast<double>(edges.size())));

    std::vector<NodePair> extra;
    if (budget > 0) {
        RngStream rng = RngStream::derive(seed, "candidates");
        extra = sample_non_adjacent_pairs(g.adjacency, budget, rng, p.sensitive);
    }

    p.candidates.reserve(edges.size() + extra.size());
    p.theta = Vector::Zero(static_cast<Eigen::Index>(edges.size() + extra.size()));
    for (const Edge& e : edges) p.candidates.emplace_back(e.u, e.v);
    for (const NodePair& q : extra) p.candidates.push_back(q);

    std::vector<std::size_t> order(p.candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p.candidates[a] < p.candidates[b];
    });
    std::vector<NodePair> sorted;
    sorted.reserve(order.size());
    Vector theta(p.theta.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t src = order[i];
        sorted.push_back(p.candidates[src]);
        theta[static_cast<Eigen::Index>(i)] =
            src < edges.size() ? edges[src].w : 0.0;  // warm start at the visible graph
    }
    p.candidates = std::move(sorted);
    p.theta = std::move(theta);
    return p;
}

SpMat materialize(const GraphLearner& p) {
    std::vector<Eigen::Triplet<Real>> trips;
    if (p.mode == LearnerMode::Sparse) {
        if (p.theta.size() != static_cast<Eigen::Index>(p.candidates.size()))
            throw std::invalid_argument("materialize: theta/candidate size mismatch");
        trips.reserve(2 * p.candidates.size());
        for (std::size_t i = 0; i < p.candidates.size(); ++i) {
            const NodePair q = p.candidates[i];
            const Real w = std::clamp(p.theta[static_cast<Eigen::Index>(i)], 0.0, 1.0);
            trips.emplace_back(q.u, q.v, w);
            trips.emplace_back(q.v, q.u, w);
        }
    } else {
        if (p.theta.size() != static_cast<Eigen::Index>(p.n) * p.n)
            throw std::invalid_argument("materialize: theta size is not n*n");
        const Eigen::Map<const Matrix> th(p.theta.data(), p.n, p.n);
        for (int v = 0; v < p.n; ++v) {
            for (int u = 0; u < v; ++u) {
                if (p.sensitive.count(NodePair(u, v))) continue;
                const Real w = std::clamp(0.5 * (th(u, v) + th(v, u)), 0.0, 1.0);
                if (w == 0.0) continue;
                trips.emplace_back(u, v, w);
                trips.emplace_back(v, u, w);
            }
        }
    }
    SpMat a(p.n, p.n);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

double privacy_loss(const AttackModel& m, const SpMat& a_prime, const NodeFeatures& x,
                    const std::vector<NodePair>& sensitive) {
    return pair_loss(m, a_prime, x, privacy_loss_spec(sensitive));
}

double utility_loss(const SpMat& a, const SpMat& a_prime) {
    check_square_match(a, a_prime, "utility_loss");
    return (SpMat(a - a_prime)).squaredNorm();
}

double learner_loss(const AttackModel& m, const SpMat& a, const SpMat& a_prime,
                    const NodeFeatures& x, const std::vector<NodePair>& sensitive,
                    double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("learner_loss: alpha must be finite and >= 0");
    return privacy_loss(m, a_prime, x, sensitive) + alpha * utility_loss(a, a_prime);
}

LearnerStep learner_loss_and_grad(const AttackModel& m, const SpMat& a, const SpMat& a_prime,
                                  const NodeFeatures& x, const std::vector<NodePair>& sensitive,
                                  double alpha, const GraphLearner& p) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("learner_loss_and_grad: alpha must be finite and >= 0");
    check_square_match(a, a_prime, "learner_loss_and_grad");
    const PairLossSpec spec = privacy_loss_spec(sensitive);

    LearnerStep out;
    out.utility = (SpMat(a - a_prime)).squaredNorm();

    if (p.mode == LearnerMode::Sparse) {
        const std::vector<double> gp =
            loss_grad_at_pairs(m, a_prime, x, spec, p.candidates, &out.privacy);
        out.grad = Vector::Zero(p.theta.size());
        for (std::size_t i = 0; i < p.candidates.size(); ++i) {
            const NodePair q = p.candidates[i];
            // Symmetrized adjacency gradient at (u, v), plus the utility pull
            // 2*alpha*(A' - A) per entry. One theta drives both mirrored
            // entries, hence the factor 2 on the pair total.
            const double util = 2.0 * alpha * (a_prime.coeff(q.u, q.v) - a.coeff(q.u, q.v));
            out.grad[static_cast<Eigen::Index>(i)] = 2.0 * (gp[i] + util);
        }
    } else {
        Matrix g = loss_grad_wrt_adjacency(m, a_prime, x, spec, &out.privacy);
        g += 2.0 * alpha * (Matrix(a_prime) - Matrix(a));
        g.diagonal().setZero();
        for (const NodePair& s : p.sensitive) {
            g(s.u, s.v) = 0.0;
            g(s.v, s.u) = 0.0;
        }
        out.grad = Eigen::Map<const Vector>(g.data(), g.size());
    }

    out.total = out.privacy + alpha * out.utility;
    return out;
}

Vector learner_grad(const AttackModel& m, const SpMat& a, const SpMat& a_prime,
                    const NodeFeatures& x, const std::vector<NodePair>& sensitive,
                    double alpha, const GraphLearner& p) {
    return learner_loss_and_grad(m, a, a_prime, x, sensitive, alpha, p).grad;
}

SpMat discretize(const SpMat& a_prime, std::uint64_t seed) {
    if (a_prime.rows() != a_prime.cols())
        throw std::invalid_argument("discretize: adjacency must be square");

    // Stored pattern entries above the diagonal, in canonical order. Explicit
    // zeros get a draw too: the candidate set, not the weight, fixes the
    // stream layout.
    std::vector<std::pair<NodePair, Real>> entries;
    for (int col = 0; col < a_prime.outerSize(); ++col) {
        for (SpMat::InnerIterator it(a_prime, col); it; ++it) {
            if (it.row() >= col) continue;
            const Real w = it.value();
            if (!(w >= 0.0 && w <= 1.0))
                throw std::invalid_argument("discretize: weight outside [0, 1]");
            entries.emplace_back(NodePair(static_cast<int>(it.row()), col), w);
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    RngStream rng = RngStream::derive(seed, "discretize");
    std::vector<Eigen::Triplet<Real>> trips;
    for (const auto& [q, w] : entries) {
        const bool keep = rng.uniform01() < w;  // w = 1 always keeps, w = 0 never does
        if (!keep) continue;
        trips.emplace_back(q.u, q.v, 1.0);
        trips.emplace_back(q.v, q.u, 1.0);
    }
    SpMat a(a_prime.rows(), a_prime.cols());
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

}  // namespace ppgsl

#pragma once

#include "ppgsl/rng.hpp"
#include "ppgsl/types.hpp"

#include <string>
#include <unordered_set>
#include <vector>

namespace ppgsl {

// Undirected weighted graph. The adjacency matrix is symmetric with a zero
// diagonal and weights in [0, 1]. It may carry explicit zero entries (the
// learner keeps a fixed candidate pattern); an edge "exists" iff weight > 0.
struct Graph {
    int n = 0;
    SpMat adjacency;            // n x n
    Matrix features;            // n x d, d == 0 when absent
    std::vector<int> labels;    // size n, or empty when absent

    double weight(int i, int j) const { return adjacency.coeff(i, j); }
    bool has_edge(int i, int j) const { return weight(i, j) > 0.0; }
};

// Everything the pipeline needs to know about hidden links and held-out data.
// All pair lists are canonical (u < v) and sorted.
struct DataSplits {
    std::vector<NodePair> sensitive;        // hidden links, removed from the visible graph
    std::vector<NodePair> eval_negatives;   // non-links scored against sensitive ones
    std::vector<NodePair> util_test_pos;    // held-out real links for link prediction
    std::vector<NodePair> util_test_neg;    // matched non-links
    std::vector<int> train_nodes;           // node classification train split (test = rest)
};

// --- construction / inspection ---

// Builds a validated symmetric adjacency. Rejects out-of-range endpoints,
// self-loops, weights outside [0, 1], and duplicate pairs with conflicting
// weights; duplicate pairs with equal weight merge. Zero-weight edges are dropped.
SpMat adjacency_from_edges(int n, const std::vector<Edge>& edges);

Graph make_graph(int n, const std::vector<Edge>& edges, Matrix features = Matrix(),
                 std::vector<int> labels = {});

// Edges (weight > 0) as canonical pairs sorted by (u, v).
std::vector<Edge> edge_list(const Graph& g);
std::vector<Edge> edge_list(const SpMat& adjacency);
long num_edges(const Graph& g);
long num_edges(const SpMat& adjacency);

// Neighbor count (weight > 0) per node.
std::vector<int> unweighted_degrees(const SpMat& adjacency);

// Throws if the adjacency is non-square, asymmetric, has diagonal entries,
// or weights outside [0, 1]; also checks feature/label row counts.
void validate_graph(const Graph& g);

// --- generators ---

// G(n, p) with p = avg_degree / (n - 1), unit weights. Runs in O(n + |E|)
// via geometric gap sampling. Requires 0 < avg_degree <= n - 1.
Graph generate_erdos_renyi(int n, double avg_degree, uint64_t seed);

// Stochastic block model; nodes are numbered block by block and labeled with
// their block index. Requires probabilities in [0, 1] and p_in > p_out.
Graph generate_sbm(const std::vector<int>& block_sizes, double p_in, double p_out,
                   uint64_t seed);

// --- masking / sampling ---

// Splits a ground-truth graph into the visible graph the defense sees and the
// evaluation data. `fraction` of the edges become sensitive links;
// `util_fraction` (defaults to `fraction`) of the remaining edges are held out
// as link-prediction test positives. Matched negative pairs are sampled
// non-adjacent in the *original* graph and disjoint from each other.
// `train_fraction` of the nodes form the classification train split.
struct MaskedGraph {
    Graph visible;
    DataSplits splits;
};
MaskedGraph mask_sensitive(const Graph& g, double fraction, uint64_t seed,
                           double util_fraction = -1.0, double train_fraction = 0.3);

// `count` distinct pairs that are non-adjacent in g (weight 0 or absent),
// excluding self-loops and `exclude`. Rejection sampling with a deterministic
// enumeration fallback for dense or tiny graphs; throws when fewer than
// `count` eligible pairs exist.
std::vector<NodePair> sample_non_adjacent_pairs(const Graph& g, size_t count, RngStream& rng,
                                                const std::unordered_set<NodePair>& exclude = {});
std::vector<NodePair> sample_non_adjacent_pairs(const SpMat& adjacency, size_t count,
                                                RngStream& rng,
                                                const std::unordered_set<NodePair>& exclude = {});

// Partial Fisher-Yates; order of the result follows the shuffle, not the pool.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, size_t k, RngStream& rng) {
    if (k > pool.size())
        throw std::invalid_argument("sample_without_replacement: k exceeds pool size");
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(rng.uniform_int(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

// --- GCN normalization ---

// D^{-1/2} (A + I) D^{-1/2} with d_i = 1 + weighted degree. Requires a
// symmetric, non-negative square matrix. The sparse form preserves the input
// pattern (explicit zeros stay explicit) plus the diagonal.
SpMat normalize_adjacency(const SpMat& a);
SpMat normalize_adjacency(const SpMat& a, Vector* degrees_out);
Matrix normalize_adjacency(const Matrix& a);

// --- features ---

// Dense feature matrix or an implicit identity (one-hot ids) that is never
// materialized; products against it short-circuit.
class NodeFeatures {
public:
    NodeFeatures() = default;
    static NodeFeatures dense(Matrix x);
    static NodeFeatures identity(Eigen::Index n);

    Eigen::Index rows() const { return identity_ ? n_ : x_.rows(); }
    Eigen::Index cols() const { return identity_ ? n_ : x_.cols(); }
    bool is_identity() const { return identity_; }

    Matrix times(const Matrix& w) const;            // X * W
    Matrix transpose_times(const Matrix& g) const;  // X^T * G
    Matrix materialize() const;                     // dense copy; tests and small graphs only

private:
    bool identity_ = false;
    Eigen::Index n_ = 0;
    Matrix x_;
};

// The features a GCN on this graph should consume: the stored matrix when
// present; otherwise implicit identity up to `identity_limit` nodes, and a
// 32-bucket log2-degree one-hot beyond that (keeps memory linear in n).
NodeFeatures effective_features(const Graph& g, Eigen::Index identity_limit = 10000);

// --- file formats ---

// Edge file: optional "# nodes N" header, then "u<TAB>v[<TAB>w]" per line,
// '#' comments and blank lines ignored, w defaults to 1. The loader merges
// duplicate and reversed duplicate lines, rejecting conflicting weights.
Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);

// Composite load; features/labels attach when their paths are non-empty, and
// row counts are validated against the graph.
Graph load_graph(const std::string& edge_path, const std::string& feature_path,
                 const std::string& label_path);

// One row per label, one column per class (max label + 1).
Matrix one_hot_labels(const std::vector<int>& labels);

// One comma-separated row of doubles per node.
Matrix load_features_csv(const std::string& path);
void save_features_csv(const std::string& path, const Matrix& x);

// One integer label per line.
std::vector<int> load_labels(const std::string& path);
void save_labels(const std::string& path, const std::vector<int>& labels);

// Sectioned splits file: [sensitive], [eval_neg], [test_pos], [test_neg]
// hold "u<TAB>v" pair lines; [train_nodes] holds one node id per line.
DataSplits load_splits(const std::string& path);
void save_splits(const std::string& path, const DataSplits& splits);

// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);
// Strict inverse: the whole string must parse. Throws std::invalid_argument.
double parse_double(const std::string& s);

}  // namespace ppgsl

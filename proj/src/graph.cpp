#include "ppgsl/graph.hpp"

#include "ppgsl/numkit.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ppgsl {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_node(int id, int n, const char* what) {
    if (id < 0 || id >= n)
        fail(std::string(what) + ": node id " + std::to_string(id) + " out of range [0, " +
             std::to_string(n) + ")");
}

// Emits every index in [0, count) selected by iid Bernoulli(p), using
// geometric gaps so the cost is O(hits), not O(count).
template <typename F>
void bernoulli_indices(uint64_t count, double p, RngStream& rng, F&& emit) {
    if (count == 0 || p <= 0.0) return;
    if (p >= 1.0) {
        for (uint64_t i = 0; i < count; ++i) emit(i);
        return;
    }
    const double log1mp = std::log1p(-p);
    uint64_t pos = 0;
    bool first = true;
    while (true) {
        const double u = rng.uniform01();
        const auto gap = static_cast<uint64_t>(std::log1p(-u) / log1mp);
        pos += gap + (first ? 0 : 1);
        first = false;
        if (pos >= count) return;
        emit(pos);
    }
}

// Inverse of the (i, j) -> linear index map over pairs i < j.
std::pair<int, int> unrank_pair(uint64_t idx, int n) {
    const double nn = static_cast<double>(n);
    const double disc = (2.0 * nn - 1.0) * (2.0 * nn - 1.0) - 8.0 * static_cast<double>(idx);
    auto i = static_cast<int64_t>((2.0 * nn - 1.0 - std::sqrt(disc)) / 2.0);
    auto offset = [n](int64_t k) {
        return static_cast<uint64_t>(k) * (2 * static_cast<uint64_t>(n) - k - 1) / 2;
    };
    while (i > 0 && offset(i) > idx) --i;
    while (offset(i + 1) <= idx) ++i;
    const auto j = static_cast<int64_t>(i + 1 + (idx - offset(i)));
    return {static_cast<int>(i), static_cast<int>(j)};
}

int parse_int(std::string_view tok, const std::string& ctx) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(ctx + ": expected integer, got '" + std::string(tok) + "'");
    return v;
}

double parse_real(std::string_view tok, const std::string& ctx) {
    double v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        fail(ctx + ": expected number, got '" + std::string(tok) + "'");
    return v;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ' ||
                          s.back() == '\t'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

SpMat adjacency_from_edges(int n, const std::vector<Edge>& edges) {
    if (n < 0) fail("adjacency_from_edges: negative node count");
    std::unordered_map<NodePair, double> merged;
    merged.reserve(edges.size());
    for (const Edge& e : edges) {
        check_node(e.u, n, "adjacency_from_edges");
        check_node(e.v, n, "adjacency_from_edges");
        if (e.u == e.v)
            fail("adjacency_from_edges: self-loop at node " + std::to_string(e.u));
        if (!(e.w >= 0.0 && e.w <= 1.0))
            fail("adjacency_from_edges: weight " + std::to_string(e.w) + " outside [0, 1] on (" +
                 std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        const NodePair p(e.u, e.v);
        auto [it, inserted] = merged.emplace(p, e.w);
        if (!inserted && it->second != e.w)
            fail("adjacency_from_edges: conflicting weights for pair (" + std::to_string(p.u) +
                 ", " + std::to_string(p.v) + ")");
    }
    std::vector<Eigen::Triplet<Real>> trips;
    trips.reserve(2 * merged.size());
    for (const auto& [p, w] : merged) {
        if (w == 0.0) continue;
        trips.emplace_back(p.u, p.v, w);
        trips.emplace_back(p.v, p.u, w);
    }
    SpMat a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();
    return a;
}

Graph make_graph(int n, const std::vector<Edge>& edges, Matrix features,
                 std::vector<int> labels) {
    Graph g;
    g.n = n;
    g.adjacency = adjacency_from_edges(n, edges);
    if (features.size() > 0 && features.rows() != n)
        fail("make_graph: feature rows != node count");
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        fail("make_graph: label count != node count");
    g.features = std::move(features);
    g.labels = std::move(labels);
    return g;
}

std::vector<Edge> edge_list(const SpMat& adjacency) {
    std::vector<Edge> out;
    for (int col = 0; col < adjacency.outerSize(); ++col) {
        for (SpMat::InnerIterator it(adjacency, col); it; ++it) {
            if (it.row() < col && it.value() > 0.0)
                out.push_back({static_cast<int>(it.row()), col, it.value()});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    return out;
}

std::vector<Edge> edge_list(const Graph& g) { return edge_list(g.adjacency); }

long num_edges(const SpMat& adjacency) {
    long cnt = 0;
    for (int col = 0; col < adjacency.outerSize(); ++col)
        for (SpMat::InnerIterator it(adjacency, col); it; ++it)
            if (it.row() < col && it.value() > 0.0) ++cnt;
    return cnt;
}

long num_edges(const Graph& g) { return num_edges(g.adjacency); }

std::vector<int> unweighted_degrees(const SpMat& adjacency) {
    std::vector<int> deg(adjacency.cols(), 0);
    for (int col = 0; col < adjacency.outerSize(); ++col)
        for (SpMat::InnerIterator it(adjacency, col); it; ++it)
            if (it.value() > 0.0) ++deg[col];
    return deg;
}

void validate_graph(const Graph& g) {
    if (g.adjacency.rows() != g.n || g.adjacency.cols() != g.n)
        fail("validate_graph: adjacency shape does not match n");
    for (int col = 0; col < g.adjacency.outerSize(); ++col) {
        for (SpMat::InnerIterator it(g.adjacency, col); it; ++it) {
            const double v = it.value();
            if (it.row() == col && v != 0.0) fail("validate_graph: nonzero diagonal entry");
            if (!(v >= 0.0 && v <= 1.0))
                fail("validate_graph: weight outside [0, 1] at (" + std::to_string(it.row()) +
                     ", " + std::to_string(col) + ")");
            if (g.adjacency.coeff(col, static_cast<int>(it.row())) != v)
                fail("validate_graph: asymmetric adjacency at (" + std::to_string(it.row()) +
                     ", " + std::to_string(col) + ")");
        }
    }
    if (g.features.size() > 0 && g.features.rows() != g.n)
        fail("validate_graph: feature rows != n");
    if (!g.labels.empty() && static_cast<int>(g.labels.size()) != g.n)
        fail("validate_graph: label count != n");
}

Graph generate_erdos_renyi(int n, double avg_degree, uint64_t seed) {
    if (n < 2) fail("generate_erdos_renyi: need at least 2 nodes");
    if (!(avg_degree > 0.0 && avg_degree <= n - 1))
        fail("generate_erdos_renyi: avg_degree must be in (0, n-1]");
    const double p = avg_degree / static_cast<double>(n - 1);
    const uint64_t total = static_cast<uint64_t>(n) * (n - 1) / 2;
    RngStream rng = RngStream::derive(seed, "er_edges");
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(p * static_cast<double>(total) * 1.1) + 16);
    bernoulli_indices(total, p, rng, [&](uint64_t idx) {
        auto [i, j] = unrank_pair(idx, n);
        edges.push_back({i, j, 1.0});
    });
    return make_graph(n, edges);
}

Graph generate_sbm(const std::vector<int>& block_sizes, double p_in, double p_out,
                   uint64_t seed) {
    if (block_sizes.empty()) fail("generate_sbm: no blocks");
    for (int s : block_sizes)
        if (s <= 0) fail("generate_sbm: block sizes must be positive");
    if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0))
        fail("generate_sbm: probabilities must lie in [0, 1]");
    if (!(p_in > p_out)) fail("generate_sbm: requires p_in > p_out");

    const int nb = static_cast<int>(block_sizes.size());
    std::vector<int> start(nb + 1, 0);
    for (int b = 0; b < nb; ++b) start[b + 1] = start[b] + block_sizes[b];
    const int n = start[nb];

    std::vector<Edge> edges;
    std::vector<int> labels(n);
    for (int b = 0; b < nb; ++b)
        std::fill(labels.begin() + start[b], labels.begin() + start[b + 1], b);

    for (int b = 0; b < nb; ++b) {
        const int s = block_sizes[b];
        if (s < 2) continue;
        RngStream rng = RngStream::derive(seed, "sbm_intra", static_cast<uint64_t>(b));
        const uint64_t total = static_cast<uint64_t>(s) * (s - 1) / 2;
        bernoulli_indices(total, p_in, rng, [&](uint64_t idx) {
            auto [i, j] = unrank_pair(idx, s);
            edges.push_back({start[b] + i, start[b] + j, 1.0});
        });
    }
    for (int a = 0; a < nb; ++a) {
        for (int b = a + 1; b < nb; ++b) {
            RngStream rng = RngStream::derive(seed, "sbm_inter", static_cast<uint64_t>(a),
                                              static_cast<uint64_t>(b));
            const auto rows = static_cast<uint64_t>(block_sizes[a]);
            const auto cols = static_cast<uint64_t>(block_sizes[b]);
            bernoulli_indices(rows * cols, p_out, rng, [&](uint64_t idx) {
                const int i = static_cast<int>(idx / cols);
                const int j = static_cast<int>(idx % cols);
                edges.push_back({start[a] + i, start[b] + j, 1.0});
            });
        }
    }
    return make_graph(n, edges, Matrix(), std::move(labels));
}

std::vector<NodePair> sample_non_adjacent_pairs(const SpMat& adjacency, size_t count,
                                                RngStream& rng,
                                                const std::unordered_set<NodePair>& exclude) {
    std::vector<NodePair> out;
    if (count == 0) return out;
    const int n = static_cast<int>(adjacency.rows());
    if (n < 2) fail("sample_non_adjacent_pairs: graph too small");
    out.reserve(count);
    std::unordered_set<NodePair> chosen;
    chosen.reserve(count);

    const size_t max_attempts = 50 * count + 1000;
    size_t attempts = 0;
    const auto nn = static_cast<uint64_t>(n);
    while (out.size() < count && attempts < max_attempts) {
        ++attempts;
        const int i = static_cast<int>(rng.uniform_int(nn));
        const int j = static_cast<int>(rng.uniform_int(nn));
        if (i == j) continue;
        const NodePair p(i, j);
        if (adjacency.coeff(p.u, p.v) > 0.0 || exclude.count(p) || chosen.count(p)) continue;
        chosen.insert(p);
        out.push_back(p);
    }
    if (out.size() < count) {
        // dense or tiny graph; enumerate the eligible pairs instead of spinning
        std::vector<NodePair> eligible;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const NodePair p(i, j);
                if (adjacency.coeff(i, j) > 0.0 || exclude.count(p) || chosen.count(p)) continue;
                eligible.push_back(p);
            }
        }
        const size_t need = count - out.size();
        if (eligible.size() < need)
            fail("sample_non_adjacent_pairs: only " +
                 std::to_string(eligible.size() + out.size()) + " eligible pairs, need " +
                 std::to_string(count));
        auto extra = sample_without_replacement(std::move(eligible), need, rng);
        out.insert(out.end(), extra.begin(), extra.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodePair> sample_non_adjacent_pairs(const Graph& g, size_t count, RngStream& rng,
                                                const std::unordered_set<NodePair>& exclude) {
    return sample_non_adjacent_pairs(g.adjacency, count, rng, exclude);
}

MaskedGraph mask_sensitive(const Graph& g, double fraction, uint64_t seed, double util_fraction,
                           double train_fraction) {
    validate_graph(g);
    if (!(fraction > 0.0 && fraction < 1.0))
        fail("mask_sensitive: fraction must lie in (0, 1)");
    if (util_fraction < 0.0) util_fraction = fraction;
    if (util_fraction >= 1.0) fail("mask_sensitive: util_fraction must lie in [0, 1)");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        fail("mask_sensitive: train_fraction must lie in (0, 1)");

    const std::vector<Edge> edges = edge_list(g);
    const size_t m = edges.size();
    if (m < 10) fail("mask_sensitive: graph needs at least 10 edges to split");
    const auto n_sens = static_cast<size_t>(fraction * static_cast<double>(m));
    if (n_sens < 1) fail("mask_sensitive: fraction selects no edges");

    // sample edge indices so the surviving lists stay in canonical order
    std::vector<size_t> idx(m);
    for (size_t i = 0; i < m; ++i) idx[i] = i;
    RngStream sens_rng = RngStream::derive(seed, "mask_sensitive");
    auto sens_idx = sample_without_replacement(idx, n_sens, sens_rng);
    std::vector<char> is_sens(m, 0);
    for (size_t i : sens_idx) is_sens[i] = 1;

    std::vector<Edge> rest;
    rest.reserve(m - n_sens);
    DataSplits splits;
    splits.sensitive.reserve(n_sens);
    for (size_t i = 0; i < m; ++i) {
        if (is_sens[i])
            splits.sensitive.emplace_back(edges[i].u, edges[i].v);
        else
            rest.push_back(edges[i]);
    }

    const auto n_util = static_cast<size_t>(util_fraction * static_cast<double>(rest.size()));
    std::vector<size_t> ridx(rest.size());
    for (size_t i = 0; i < rest.size(); ++i) ridx[i] = i;
    RngStream util_rng = RngStream::derive(seed, "mask_util");
    auto util_idx = sample_without_replacement(ridx, n_util, util_rng);
    std::vector<char> is_util(rest.size(), 0);
    for (size_t i : util_idx) is_util[i] = 1;

    std::vector<Edge> visible_edges;
    visible_edges.reserve(rest.size() - n_util);
    for (size_t i = 0; i < rest.size(); ++i) {
        if (is_util[i])
            splits.util_test_pos.emplace_back(rest[i].u, rest[i].v);
        else
            visible_edges.push_back(rest[i]);
    }

    RngStream neg_eval_rng = RngStream::derive(seed, "mask_negeval");
    splits.eval_negatives = sample_non_adjacent_pairs(g, n_sens, neg_eval_rng);
    std::unordered_set<NodePair> taken(splits.eval_negatives.begin(),
                                       splits.eval_negatives.end());
    RngStream neg_util_rng = RngStream::derive(seed, "mask_negutil");
    splits.util_test_neg = sample_non_adjacent_pairs(g, n_util, neg_util_rng, taken);

    const auto n_train = static_cast<size_t>(train_fraction * g.n);
    if (n_train < 1 || n_train >= static_cast<size_t>(g.n))
        fail("mask_sensitive: train split is empty or total");
    std::vector<int> nodes(g.n);
    for (int i = 0; i < g.n; ++i) nodes[i] = i;
    RngStream node_rng = RngStream::derive(seed, "mask_nodes");
    splits.train_nodes = sample_without_replacement(nodes, n_train, node_rng);
    std::sort(splits.train_nodes.begin(), splits.train_nodes.end());

    MaskedGraph out;
    out.visible = make_graph(g.n, visible_edges, g.features, g.labels);
    out.splits = std::move(splits);
    return out;
}

SpMat normalize_adjacency(const SpMat& a, Vector* degrees_out) {
    if (a.rows() != a.cols()) fail("normalize_adjacency: matrix not square");
    const auto n = a.rows();
    Vector deg = Vector::Ones(n);  // self-loop contributes 1
    for (int col = 0; col < a.outerSize(); ++col) {
        for (SpMat::InnerIterator it(a, col); it; ++it) {
            if (it.value() < 0.0) fail("normalize_adjacency: negative weight");
            if (it.row() == col && it.value() != 0.0)
                fail("normalize_adjacency: nonzero diagonal in input");
            deg[col] += it.value();
        }
    }
    Vector t = deg.cwiseSqrt().cwiseInverse();
    std::vector<Eigen::Triplet<Real>> trips;
    trips.reserve(static_cast<size_t>(a.nonZeros()) + static_cast<size_t>(n));
    for (int col = 0; col < a.outerSize(); ++col)
        for (SpMat::InnerIterator it(a, col); it; ++it)
            trips.emplace_back(it.row(), col, it.value() * t[it.row()] * t[col]);
    for (Eigen::Index i = 0; i < n; ++i) trips.emplace_back(i, i, t[i] * t[i]);
    SpMat out(n, n);
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    if (degrees_out) *degrees_out = std::move(deg);
    return out;
}

SpMat normalize_adjacency(const SpMat& a) { return normalize_adjacency(a, nullptr); }

Matrix normalize_adjacency(const Matrix& a) {
    if (a.rows() != a.cols()) fail("normalize_adjacency: matrix not square");
    const auto n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (a(i, i) != 0.0) fail("normalize_adjacency: nonzero diagonal in input");
        for (Eigen::Index j = 0; j < n; ++j)
            if (a(i, j) < 0.0) fail("normalize_adjacency: negative weight");
    }
    Vector t = (Vector::Ones(n) + a.rowwise().sum()).cwiseSqrt().cwiseInverse();
    Matrix out = (a + Matrix::Identity(n, n));
    out = t.asDiagonal() * out * t.asDiagonal();
    return out;
}

NodeFeatures NodeFeatures::dense(Matrix x) {
    NodeFeatures f;
    f.identity_ = false;
    f.x_ = std::move(x);
    return f;
}

NodeFeatures NodeFeatures::identity(Eigen::Index n) {
    NodeFeatures f;
    f.identity_ = true;
    f.n_ = n;
    return f;
}

Matrix NodeFeatures::times(const Matrix& w) const {
    if (identity_) {
        if (w.rows() != n_) fail("NodeFeatures::times: dimension mismatch");
        return w;
    }
    return matmul(x_, w);
}

Matrix NodeFeatures::transpose_times(const Matrix& g) const {
    if (identity_) {
        if (g.rows() != n_) fail("NodeFeatures::transpose_times: dimension mismatch");
        return g;
    }
    if (x_.rows() != g.rows()) fail("NodeFeatures::transpose_times: dimension mismatch");
    return x_.transpose() * g;
}

Matrix NodeFeatures::materialize() const {
    if (identity_) return Matrix::Identity(n_, n_);
    return x_;
}

NodeFeatures effective_features(const Graph& g, Eigen::Index identity_limit) {
    if (g.features.cols() > 0) return NodeFeatures::dense(g.features);
    if (g.n <= identity_limit) return NodeFeatures::identity(g.n);
    // degree buckets keep the input layer O(n) on big featureless graphs
    constexpr int kBuckets = 32;
    Matrix x = Matrix::Zero(g.n, kBuckets);
    const std::vector<int> deg = unweighted_degrees(g.adjacency);
    for (int i = 0; i < g.n; ++i) {
        const auto b = std::min<int>(kBuckets - 1,
                                     std::bit_width(static_cast<unsigned>(deg[i]) + 1u) - 1);
        x(i, b) = 1.0;
    }
    return NodeFeatures::dense(std::move(x));
}

// --- file formats ---

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

Graph load_graph(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    int line_no = 0;
    long n_header = -1;
    std::unordered_map<NodePair, std::pair<double, int>> merged;  // weight, first line
    int max_node = -1;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip(line);
        if (sv.empty()) continue;
        const std::string ctx = path + ":" + std::to_string(line_no);
        if (sv.front() == '#') {
            // recognize the optional "# nodes N" header, ignore other comments
            auto toks = split_ws(sv.substr(1));
            if (toks.size() == 2 && toks[0] == "nodes" && n_header < 0)
                n_header = parse_int(toks[1], ctx + " (nodes header)");
            continue;
        }
        auto toks = split_ws(sv);
        if (toks.size() != 2 && toks.size() != 3)
            fail(ctx + ": expected 'u v [w]', got " + std::to_string(toks.size()) + " fields");
        const int u = parse_int(toks[0], ctx);
        const int v = parse_int(toks[1], ctx);
        const double w = toks.size() == 3 ? parse_real(toks[2], ctx) : 1.0;
        if (u < 0 || v < 0) fail(ctx + ": negative node id");
        if (u == v) fail(ctx + ": self-loop on node " + std::to_string(u));
        if (!(w >= 0.0 && w <= 1.0)) fail(ctx + ": weight outside [0, 1]");
        max_node = std::max({max_node, u, v});
        const NodePair p(u, v);
        auto [it, inserted] = merged.emplace(p, std::make_pair(w, line_no));
        if (!inserted && it->second.first != w)
            fail(ctx + ": weight conflicts with line " + std::to_string(it->second.second) +
                 " for pair (" + std::to_string(p.u) + ", " + std::to_string(p.v) + ")");
    }
    if (n_header < 0 && max_node < 0)
        throw std::invalid_argument(path + ": no edges and no '# nodes N' header");
    const int n = n_header >= 0 ? static_cast<int>(n_header) : max_node + 1;
    if (max_node >= n)
        throw std::invalid_argument(path + ": node id " + std::to_string(max_node) +
                                    " outside declared node count " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(merged.size());
    for (const auto& [p, wl] : merged) edges.push_back({p.u, p.v, wl.first});
    return make_graph(n, edges);
}

void save_graph(const std::string& path, const Graph& g) {
    std::ofstream out = open_output(path);
    out << "# nodes " << g.n << "\n";
    for (const Edge& e : edge_list(g))
        out << e.u << '\t' << e.v << '\t' << format_double(e.w) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

Graph load_graph(const std::string& edge_path, const std::string& feature_path,
                 const std::string& label_path) {
    Graph g = load_graph(edge_path);
    if (!feature_path.empty()) g.features = load_features_csv(feature_path);
    if (!label_path.empty()) g.labels = load_labels(label_path);
    validate_graph(g);
    return g;
}

Matrix one_hot_labels(const std::vector<int>& labels) {
    int classes = 0;
    for (int y : labels) {
        if (y < 0) throw std::invalid_argument("one_hot_labels: negative label");
        classes = std::max(classes, y + 1);
    }
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), classes);
    for (std::size_t i = 0; i < labels.size(); ++i)
        x(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    return x;
}

Matrix load_features_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    int line_no = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip(line);
        if (sv.empty() || sv.front() == '#') continue;
        const std::string ctx = path + ":" + std::to_string(line_no);
        std::vector<double> row;
        size_t start = 0;
        while (start <= sv.size()) {
            size_t comma = sv.find(',', start);
            if (comma == std::string_view::npos) comma = sv.size();
            row.push_back(parse_real(strip(sv.substr(start, comma - start)), ctx));
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(ctx + ": row has " + std::to_string(row.size()) + " columns, expected " +
                 std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(path + ": empty feature file");
    Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rows[i][j];
    return x;
}

void save_features_csv(const std::string& path, const Matrix& x) {
    std::ofstream out = open_output(path);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j) out << ',';
            out << format_double(x(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<int> load_labels(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    int line_no = 0;
    std::vector<int> labels;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip(line);
        if (sv.empty() || sv.front() == '#') continue;
        labels.push_back(parse_int(sv, path + ":" + std::to_string(line_no)));
    }
    if (labels.empty()) fail(path + ": empty label file");
    return labels;
}

void save_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out = open_output(path);
    for (int l : labels) out << l << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {
const char* kSplitSections[] = {"sensitive", "eval_neg", "test_pos", "test_neg", "train_nodes"};
}

DataSplits load_splits(const std::string& path) {
    std::ifstream in = open_input(path);
    DataSplits s;
    std::string line;
    int line_no = 0;
    int section = -1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip(line);
        if (sv.empty() || sv.front() == '#') continue;
        const std::string ctx = path + ":" + std::to_string(line_no);
        if (sv.front() == '[') {
            if (sv.back() != ']') fail(ctx + ": malformed section header");
            const std::string_view name = sv.substr(1, sv.size() - 2);
            section = -1;
            for (int k = 0; k < 5; ++k)
                if (name == kSplitSections[k]) section = k;
            if (section < 0) fail(ctx + ": unknown section [" + std::string(name) + "]");
            continue;
        }
        if (section < 0) fail(ctx + ": data before any section header");
        if (section == 4) {
            s.train_nodes.push_back(parse_int(sv, ctx));
            continue;
        }
        auto toks = split_ws(sv);
        if (toks.size() != 2) fail(ctx + ": expected 'u v'");
        const NodePair p(parse_int(toks[0], ctx), parse_int(toks[1], ctx));
        if (p.u == p.v) fail(ctx + ": self-pair");
        switch (section) {
            case 0: s.sensitive.push_back(p); break;
            case 1: s.eval_negatives.push_back(p); break;
            case 2: s.util_test_pos.push_back(p); break;
            case 3: s.util_test_neg.push_back(p); break;
            default: break;
        }
    }
    return s;
}

void save_splits(const std::string& path, const DataSplits& s) {
    std::ofstream out = open_output(path);
    auto write_pairs = [&](const char* name, const std::vector<NodePair>& pairs) {
        out << '[' << name << "]\n";
        for (const NodePair& p : pairs) out << p.u << '\t' << p.v << '\n';
    };
    write_pairs(kSplitSections[0], s.sensitive);
    write_pairs(kSplitSections[1], s.eval_negatives);
    write_pairs(kSplitSections[2], s.util_test_pos);
    write_pairs(kSplitSections[3], s.util_test_neg);
    out << "[train_nodes]\n";
    for (int v : s.train_nodes) out << v << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ppgsl

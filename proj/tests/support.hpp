#pragma once

// Reference implementations the tests trust instead of the library. They are
// deliberately naive: dense algebra, set enumeration, O(P*N) loops. Anything
// the library computes cleverly must agree with these.

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "ppgsl/graph.hpp"
#include "ppgsl/rng.hpp"
#include "ppgsl/types.hpp"

namespace refimpl {

using ppgsl::Matrix;
using ppgsl::NodePair;
using ppgsl::Real;
using ppgsl::SpMat;
using ppgsl::Vector;

// D^{-1/2} (A + I) D^{-1/2} with d_i = 1 + sum_j A_ij, all dense.
inline Matrix normalize(const Matrix& a) {
    const Eigen::Index n = a.rows();
    Matrix at = a + Matrix::Identity(n, n);
    Vector d = at.rowwise().sum();
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = at(i, j) / std::sqrt(d[i] * d[j]);
    return out;
}

// two-layer GCN forward, dense
inline Matrix gcn(const Matrix& a, const Matrix& x, const Matrix& w1, const Matrix& w2) {
    const Matrix ah = normalize(a);
    const Matrix h1 = (ah * x * w1).cwiseMax(0.0);
    return ah * h1 * w2;
}

// Mann-Whitney by brute force: 1 per win, 0.5 per tie.
inline double auc(const std::vector<double>& pos, const std::vector<double>& neg) {
    double s = 0.0;
    for (double p : pos)
        for (double q : neg) s += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
    return s / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

// Neighbor sets from positive weights; scores accumulated in ascending
// neighbor order so floating-point sums are comparable bit for bit.
inline std::set<int> neighbors(const SpMat& a, int u) {
    std::set<int> out;
    for (SpMat::InnerIterator it(a, u); it; ++it)
        if (it.value() > 0.0 && it.row() != u) out.insert(static_cast<int>(it.row()));
    return out;
}

inline double common_neighbors(const SpMat& a, int u, int v) {
    const std::set<int> nu = neighbors(a, u), nv = neighbors(a, v);
    double s = 0.0;
    for (int w : nu)
        if (nv.count(w) && w != u && w != v) s += 1.0;
    return s;
}

inline double adamic_adar(const SpMat& a, int u, int v) {
    const std::set<int> nu = neighbors(a, u), nv = neighbors(a, v);
    double s = 0.0;
    for (int w : nu)
        if (nv.count(w) && w != u && w != v)
            s += 1.0 / std::log(static_cast<double>(neighbors(a, w).size()));
    return s;
}

inline double resource_allocation(const SpMat& a, int u, int v) {
    const std::set<int> nu = neighbors(a, u), nv = neighbors(a, v);
    double s = 0.0;
    for (int w : nu)
        if (nv.count(w) && w != u && w != v)
            s += 1.0 / static_cast<double>(neighbors(a, w).size());
    return s;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// |a - b| relative to the larger magnitude, floored at 1 so near-zero
// gradients are compared absolutely
inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_rel_err(const Vector& a, const Vector& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a[i], b[i]));
    return worst;
}

// Random undirected graph on n nodes with edge probability p; guarantees at
// least one edge and one non-edge by construction (n >= 3, 0 < p < 1 assumed).
inline ppgsl::Graph random_graph(int n, double p, std::uint64_t seed) {
    ppgsl::RngStream rng(seed);
    std::vector<ppgsl::Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform01() < p) edges.push_back({u, v, 1.0});
    if (edges.empty()) edges.push_back({0, 1, 1.0});
    if (edges.size() == static_cast<std::size_t>(n) * (n - 1) / 2) edges.pop_back();
    return ppgsl::make_graph(n, edges);
}

inline std::vector<NodePair> non_edges(const ppgsl::Graph& g) {
    std::vector<NodePair> out;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            if (!g.has_edge(u, v)) out.emplace_back(u, v);
    return out;
}

inline std::vector<NodePair> edges_of(const ppgsl::Graph& g) {
    std::vector<NodePair> out;
    for (const ppgsl::Edge& e : ppgsl::edge_list(g)) out.emplace_back(e.u, e.v);
    return out;
}

}  // namespace refimpl

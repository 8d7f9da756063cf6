#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <utility>
#include <vector>

namespace ppgsl {

using Real = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<Real>;  // column-major; all graph matrices are symmetric

// Unordered node pair, stored canonically as (min, max).
struct NodePair {
    int u = 0;
    int v = 0;

    NodePair() = default;
    NodePair(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const NodePair&, const NodePair&) = default;
    friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

struct Edge {
    int u = 0;
    int v = 0;
    Real w = 1.0;
};

}  // namespace ppgsl

template <>
struct std::hash<ppgsl::NodePair> {
    size_t operator()(const ppgsl::NodePair& p) const noexcept {
        return (static_cast<uint64_t>(static_cast<uint32_t>(p.u)) << 32) |
               static_cast<uint32_t>(p.v);
    }
};

#pragma once

#include "ppgsl/graph.hpp"
#include "ppgsl/types.hpp"

#include <vector>

namespace ppgsl {

// Forward caches for the 2-layer GCN  Z = A_hat * relu(A_hat * X * W1) * W2.
// a_hat is borrowed, not owned: callers normalize once per adjacency and keep
// it alive for the backward passes (training reuses it across epochs).
struct GcnForward {
    const SpMat* a_hat = nullptr;
    Matrix n1;   // X  W1          n x h1
    Matrix p1;   // A_hat n1       n x h1, pre-activation
    Matrix h1;   // relu(p1)
    Matrix m2;   // h1 W2          n x h2
    Matrix z;    // A_hat m2       n x h2, embeddings
};

GcnForward gcn_forward(const SpMat& a_hat, const NodeFeatures& x, const Matrix& w1,
                       const Matrix& w2);

struct GcnWeightGrads {
    Matrix w1;
    Matrix w2;
};

// dL/dW1, dL/dW2 given g_z = dL/dZ.
GcnWeightGrads gcn_backward_weights(const GcnForward& fwd, const NodeFeatures& x,
                                    const Matrix& w2, const Matrix& g_z);

// dL/dA for the *raw* adjacency A, where a_hat = normalize_adjacency(A) and
// `degrees` holds d_i = 1 + weighted degree (from the same normalize call).
// The degree terms are differentiated, not frozen. Entries are returned in the
// symmetrized convention: the value at (p, q) is the derivative of L along the
// direction (E_pq + E_qp)/2, i.e. (dL/dA_pq + dL/dA_qp)/2 for independent
// entries. The diagonal of the dense result is meaningless for graphs and
// should be ignored.
Matrix gcn_backward_adjacency_dense(const GcnForward& fwd, const Vector& degrees,
                                    const Matrix& w2, const Matrix& g_z);

// Same gradient evaluated only at the given pairs; O((nnz + pairs) * h) and
// never materializes an n x n intermediate.
std::vector<double> gcn_backward_adjacency_at_pairs(const GcnForward& fwd, const Vector& degrees,
                                                    const Matrix& w2, const Matrix& g_z,
                                                    const std::vector<NodePair>& pairs);

}  // namespace ppgsl

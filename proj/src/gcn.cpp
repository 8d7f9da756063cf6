#include "ppgsl/gcn.hpp"

#include "ppgsl/numkit.hpp"

#include <stdexcept>

namespace ppgsl {

GcnForward gcn_forward(const SpMat& a_hat, const NodeFeatures& x, const Matrix& w1,
                       const Matrix& w2) {
    if (a_hat.rows() != a_hat.cols() || a_hat.rows() != x.rows())
        throw std::invalid_argument("gcn_forward: adjacency/feature shape mismatch");
    if (x.cols() != w1.rows() || w1.cols() != w2.rows())
        throw std::invalid_argument("gcn_forward: weight shape mismatch");
    GcnForward f;
    f.a_hat = &a_hat;
    f.n1 = x.times(w1);
    f.p1 = a_hat * f.n1;
    f.h1 = relu(f.p1);
    f.m2 = f.h1 * w2;
    f.z = a_hat * f.m2;
    return f;
}

namespace {

// dL/dP1 = (A_hat dL/dZ W2^T) masked by relu'(P1)
Matrix relu_layer_grad(const GcnForward& fwd, const Matrix& w2, const Matrix& g_z) {
    Matrix q = (*fwd.a_hat * g_z) * w2.transpose();
    return (fwd.p1.array() > 0.0).select(q, 0.0);
}

}  // namespace

GcnWeightGrads gcn_backward_weights(const GcnForward& fwd, const NodeFeatures& x,
                                    const Matrix& w2, const Matrix& g_z) {
    GcnWeightGrads g;
    const Matrix d_m2 = *fwd.a_hat * g_z;      // dL/dM2 (A_hat symmetric)
    g.w2 = fwd.h1.transpose() * d_m2;
    const Matrix q = (fwd.p1.array() > 0.0).select(d_m2 * w2.transpose(), 0.0);
    g.w1 = x.transpose_times(*fwd.a_hat * q);  // dL/dN1 = A_hat q
    return g;
}

// The chain through the normalization: with t_i = d_i^{-1/2} and
// A_hat_ab = (A_ab + [a==b]) t_a t_b, the derivative of L wrt an independent
// entry A_pq is
//   S_pq t_p t_q - (r_p + c_p) / (2 d_p)
// where S = dL/dA_hat = g_z m2^T + q n1^T, r_p = sum_b S_pb A_hat_pb and
// c_p = sum_a S_ap A_hat_ap pick up the differentiated degrees.

Matrix gcn_backward_adjacency_dense(const GcnForward& fwd, const Vector& degrees,
                                    const Matrix& w2, const Matrix& g_z) {
    const Matrix q = relu_layer_grad(fwd, w2, g_z);
    const Matrix s = g_z * fwd.m2.transpose() + q * fwd.n1.transpose();
    const auto n = s.rows();
    Vector r = Vector::Zero(n), c = Vector::Zero(n);
    const SpMat& ah = *fwd.a_hat;
    for (int col = 0; col < ah.outerSize(); ++col) {
        for (SpMat::InnerIterator it(ah, col); it; ++it) {
            r[it.row()] += s(it.row(), col) * it.value();
            c[col] += s(it.row(), col) * it.value();
        }
    }
    const Vector t = degrees.cwiseSqrt().cwiseInverse();
    const Vector h = (r + c).cwiseQuotient(2.0 * degrees);
    Matrix g(n, n);
    for (Eigen::Index pp = 0; pp < n; ++pp)
        for (Eigen::Index qq = 0; qq < n; ++qq)
            g(pp, qq) = 0.5 * (s(pp, qq) + s(qq, pp)) * t[pp] * t[qq] - 0.5 * (h[pp] + h[qq]);
    return g;
}

std::vector<double> gcn_backward_adjacency_at_pairs(const GcnForward& fwd, const Vector& degrees,
                                                    const Matrix& w2, const Matrix& g_z,
                                                    const std::vector<NodePair>& pairs) {
    const Matrix q = relu_layer_grad(fwd, w2, g_z);
    const auto n = fwd.z.rows();
    const SpMat& ah = *fwd.a_hat;
    // S entries are only needed on the a_hat pattern (for the degree terms)
    // and at the requested pairs; evaluate them as row dot products.
    auto s_at = [&](Eigen::Index a, Eigen::Index b) {
        return g_z.row(a).dot(fwd.m2.row(b)) + q.row(a).dot(fwd.n1.row(b));
    };
    Vector r = Vector::Zero(n), c = Vector::Zero(n);
    for (int col = 0; col < ah.outerSize(); ++col) {
        for (SpMat::InnerIterator it(ah, col); it; ++it) {
            const double sv = s_at(it.row(), col) * it.value();
            r[it.row()] += sv;
            c[col] += sv;
        }
    }
    const Vector t = degrees.cwiseSqrt().cwiseInverse();
    const Vector h = (r + c).cwiseQuotient(2.0 * degrees);
    std::vector<double> out(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) {
        const auto [u, v] = pairs[i];
        out[i] = 0.5 * (s_at(u, v) + s_at(v, u)) * t[u] * t[v] - 0.5 * (h[u] + h[v]);
    }
    return out;
}

}  // namespace ppgsl

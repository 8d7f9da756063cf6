#pragma once

#include "ppgsl/rng.hpp"
#include "ppgsl/types.hpp"

#include <cmath>
#include <cstdint>
#include <functional>

namespace ppgsl {

// --- elementwise, expression-friendly ---

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& x) {
    return x.cwiseMax(typename Derived::Scalar(0));
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& x) {
    return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

// --- checked products ---

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix spmm(const SpMat& a, const Matrix& b);

// --- losses ---

inline constexpr double kBceClamp = 1e-12;

// binary cross-entropy with probability clamped to [kBceClamp, 1 - kBceClamp]
double bce(double p, double target);

// --- cosine similarity ---

// Zero-norm inputs yield similarity 0; the event is counted so callers can
// surface degenerate embeddings instead of silently scoring them.
double cosine_sim(const Vector& a, const Vector& b);
uint64_t zero_norm_cosine_count();
void reset_zero_norm_cosine_count();

// --- optimizer ---

struct AdamState {
    Vector m, v;
    long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    explicit AdamState(Eigen::Index n) : m(Vector::Zero(n)), v(Vector::Zero(n)) {}
};

// One bias-corrected Adam step, in place. Throws if the gradient contains a
// non-finite value, naming the first offending index.
void adam_step(Eigen::Ref<Vector> params, const Vector& grad, AdamState& state, double lr);

// --- init ---

// Xavier/Glorot uniform on [-sqrt(6/(fan_in+fan_out)), +...], filled in storage order
Matrix xavier_uniform(Eigen::Index rows, Eigen::Index cols, RngStream& rng);

// --- diagnostics ---

// central finite differences, step h per coordinate
Vector finite_diff_grad(const std::function<double(const Vector&)>& f, const Vector& x,
                        double h = 1e-5);

// FNV-1a over the raw bytes of a vector; cheap bitwise fingerprint
uint64_t checksum(const Vector& x);
uint64_t checksum(const Matrix& x);

}  // namespace ppgsl

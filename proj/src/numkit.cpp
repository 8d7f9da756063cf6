#include "ppgsl/numkit.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace ppgsl {

namespace {
std::atomic<uint64_t> g_zero_norm_cosine{0};
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions differ (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                    ")");
    return a * b;
}

Matrix spmm(const SpMat& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("spmm: inner dimensions differ (" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + ")");
    return a * b;
}

double bce(double p, double target) {
    if (p < kBceClamp) p = kBceClamp;
    if (p > 1.0 - kBceClamp) p = 1.0 - kBceClamp;
    return -(target * std::log(p) + (1.0 - target) * std::log1p(-p));
}

double cosine_sim(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine_sim: size mismatch");
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        g_zero_norm_cosine.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    return a.dot(b) / (na * nb);
}

uint64_t zero_norm_cosine_count() { return g_zero_norm_cosine.load(std::memory_order_relaxed); }
void reset_zero_norm_cosine_count() { g_zero_norm_cosine.store(0, std::memory_order_relaxed); }

void adam_step(Eigen::Ref<Vector> params, const Vector& grad, AdamState& state, double lr) {
    if (params.size() != grad.size() || params.size() != state.m.size())
        throw std::invalid_argument("adam_step: size mismatch");
    for (Eigen::Index i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad[i]))
            throw std::runtime_error("adam_step: non-finite gradient at index " +
                                     std::to_string(i));
    }
    state.t += 1;
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    params -= (lr / bc1) * state.m.cwiseQuotient(((state.v / bc2).cwiseSqrt().array() + state.eps).matrix());
}

Matrix xavier_uniform(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix w(rows, cols);
    double* p = w.data();
    for (Eigen::Index i = 0; i < w.size(); ++i) p[i] = rng.uniform(-limit, limit);
    return w;
}

Vector finite_diff_grad(const std::function<double(const Vector&)>& f, const Vector& x,
                        double h) {
    Vector g(x.size());
    Vector xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double orig = xp[i];
        xp[i] = orig + h;
        const double fp = f(xp);
        xp[i] = orig - h;
        const double fm = f(xp);
        xp[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

uint64_t checksum(const Vector& x) {
    return fnv1a64(x.data(), static_cast<size_t>(x.size()) * sizeof(double));
}

uint64_t checksum(const Matrix& x) {
    return fnv1a64(x.data(), static_cast<size_t>(x.size()) * sizeof(double));
}

}  // namespace ppgsl

#include "ppgsl/rng.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ppgsl {

uint64_t fnv1a64(const void* data, size_t len, uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a64(std::string_view s, uint64_t h) { return fnv1a64(s.data(), s.size(), h); }

uint64_t fnv1a64(const char* s, uint64_t h) { return fnv1a64(std::string_view(s), h); }

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t RngStream::derive_seed(uint64_t master, std::string_view label, uint64_t i, uint64_t j) {
    uint64_t h = fnv1a64(&master, sizeof(master));
    h = fnv1a64(label, h);
    h = fnv1a64(&i, sizeof(i), h);
    h = fnv1a64(&j, sizeof(j), h);
    return splitmix64(h);
}

RngStream RngStream::derive(uint64_t master, std::string_view label, uint64_t i, uint64_t j) {
    return RngStream(derive_seed(master, label, i, j));
}

uint64_t RngStream::uniform_int(uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: empty range");
    // rejection keeps the draw unbiased for any n
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

double RngStream::laplace(double scale) {
    // u in (-1/2, 1/2); inverse CDF
    double u = uniform01() - 0.5;
    if (u == -0.5) u = std::nextafter(-0.5, 0.0);
    const double s = (u < 0.0) ? -1.0 : 1.0;
    return -scale * s * std::log1p(-2.0 * std::abs(u));
}

}  // namespace ppgsl

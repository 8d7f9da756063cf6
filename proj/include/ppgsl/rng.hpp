#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ppgsl {

// FNV-1a 64-bit over a byte buffer. Used for substream derivation and content checksums.
uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL);
uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL);
// Exact match for string literals: without it, fnv1a64("x", h) decays to the
// buffer overload and treats the chained hash as a byte count.
uint64_t fnv1a64(const char* s, uint64_t h = 0xcbf29ce484222325ULL);

// splitmix64 finalizer; decorrelates FNV outputs before they seed an engine.
uint64_t splitmix64(uint64_t x);

// Deterministic random stream. All distributions are hand-rolled on top of
// mt19937_64 because the std:: distribution algorithms are implementation-defined
// and would break cross-platform bitwise reproducibility.
//
// Streams are derived, not shared: derive(master, label, i, j) gives an
// independent stream per consumer, so adding a draw in one place never shifts
// the values seen by another.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : eng_(seed) {}

    static RngStream derive(uint64_t master, std::string_view label,
                            uint64_t i = 0, uint64_t j = 0);

    // The mixed seed derive() would construct its engine from; for handing a
    // whole sub-seed to a component that derives its own streams.
    static uint64_t derive_seed(uint64_t master, std::string_view label,
                                uint64_t i = 0, uint64_t j = 0);

    uint64_t raw() { return eng_(); }

    // uniform on [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform on [0, n), unbiased (rejection)
    uint64_t uniform_int(uint64_t n);

    // uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Laplace(0, scale) via inverse CDF
    double laplace(double scale);

private:
    std::mt19937_64 eng_;
};

}  // namespace ppgsl

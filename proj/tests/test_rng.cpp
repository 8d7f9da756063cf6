#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "ppgsl/rng.hpp"

using namespace ppgsl;

TEST_CASE("fnv1a64 matches the published test vectors") {
    // offset basis for the empty string, then the classic single-char probes
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("fnv1a64 chains across calls") {
    const uint64_t once = fnv1a64("graph-seed");
    const uint64_t split = fnv1a64("seed", fnv1a64("graph-"));
    CHECK(once == split);
}

TEST_CASE("same seed, same stream; different seed, different stream") {
    RngStream a(42), b(42), c(43);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 100; ++i) {
        const uint64_t x = a.raw(), y = b.raw(), z = c.raw();
        all_equal = all_equal && x == y;
        any_equal_c = any_equal_c || x == z;
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);  // 100 collisions in a row would be a bug, one is ~impossible
}

TEST_CASE("derived streams are independent of sibling consumption") {
    // drawing more from one substream must not shift another
    RngStream a1 = RngStream::derive(7, "alpha");
    RngStream b1 = RngStream::derive(7, "beta");
    (void)a1.raw();
    (void)a1.raw();
    const uint64_t b_first = b1.raw();

    RngStream b2 = RngStream::derive(7, "beta");
    CHECK(b2.raw() == b_first);
}

TEST_CASE("derive distinguishes label and indices") {
    const uint64_t base = RngStream::derive_seed(9, "stream", 0, 0);
    CHECK(base != RngStream::derive_seed(9, "stream", 1, 0));
    CHECK(base != RngStream::derive_seed(9, "stream", 0, 1));
    CHECK(base != RngStream::derive_seed(9, "maerts", 0, 0));
    CHECK(base != RngStream::derive_seed(10, "stream", 0, 0));
    CHECK(base == RngStream::derive_seed(9, "stream"));
}

TEST_CASE("uniform01 lands in [0, 1) and fills the unit interval") {
    RngStream rng(1);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("uniform_int is in range and roughly uniform") {
    RngStream rng(2);
    const uint64_t n = 7;
    std::vector<int> counts(n, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        const uint64_t k = rng.uniform_int(n);
        REQUIRE(k < n);
        ++counts[k];
    }
    // each bucket expects 10000; 6 sigma is about 580
    for (int c : counts) {
        CHECK(c > 9300);
        CHECK(c < 10700);
    }
}

TEST_CASE("uniform_int handles n = 1 and rejects n = 0") {
    RngStream rng(3);
    CHECK(rng.uniform_int(1) == 0);
    CHECK_THROWS_AS((void)rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("laplace is centered with the right spread") {
    RngStream rng(4);
    const double scale = 2.0;
    const int draws = 100000;
    double sum = 0.0, abs_sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double x = rng.laplace(scale);
        REQUIRE(std::isfinite(x));
        sum += x;
        abs_sum += std::abs(x);
    }
    // mean 0 with stdev scale*sqrt(2); E|x| = scale
    CHECK(std::abs(sum / draws) < 0.05);
    CHECK(abs_sum / draws == doctest::Approx(scale).epsilon(0.02));
}

TEST_CASE("laplace produces both signs") {
    RngStream rng(5);
    int negatives = 0;
    for (int i = 0; i < 1000; ++i) negatives += rng.laplace(1.0) < 0.0;
    CHECK(negatives > 400);
    CHECK(negatives < 600);
}

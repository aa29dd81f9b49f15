#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "ihr/error.hpp"
#include "ihr/random.hpp"

using namespace ihr;

TEST_CASE("derive_substream is deterministic") {
    const StreamId id{1, 42, 2};
    auto a = derive_substream(kDefaultMasterSeed, id);
    auto b = derive_substream(kDefaultMasterSeed, id);
    CHECK(a == b);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("distinct stream ids give distinct states") {
    // 10^4 ids covering all three fields, for one seed.
    std::unordered_set<std::uint64_t> states;
    std::size_t made = 0;
    for (std::uint16_t tag = 0; tag < 5; ++tag) {
        for (std::uint8_t var = 0; var < 4; ++var) {
            for (std::uint64_t trial = 0; trial < 500; ++trial) {
                states.insert(derive_substream(kDefaultMasterSeed, {tag, trial, var}).state());
                ++made;
            }
        }
    }
    CHECK(made == 10000);
    CHECK(states.size() == made);
}

TEST_CASE("distinct seeds give distinct states") {
    std::unordered_set<std::uint64_t> states;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        states.insert(derive_substream(seed, {1, 7, 0}).state());
    }
    CHECK(states.size() == 10000);
}

TEST_CASE("substreams are independent of consumption order") {
    auto a1 = derive_substream(99, {3, 0, 0});
    auto b1 = derive_substream(99, {3, 1, 0});
    std::vector<std::uint64_t> b_first;
    for (int i = 0; i < 10; ++i) b_first.push_back(b1.next_u64());

    auto a2 = derive_substream(99, {3, 0, 0});
    for (int i = 0; i < 1000; ++i) a2.next_u64();
    auto b2 = derive_substream(99, {3, 1, 0});
    for (int i = 0; i < 10; ++i) CHECK(b2.next_u64() == b_first[i]);
    (void)a1;
}

TEST_CASE("next_uniform respects its range and centre") {
    auto src = derive_substream(1, {9, 0, 0});
    double lo_seen = 10.0, hi_seen = -10.0;
    for (int i = 0; i < 1000000; ++i) {
        const double x = next_uniform(src, 0.10, 1.80);
        lo_seen = std::min(lo_seen, x);
        hi_seen = std::max(hi_seen, x);
    }
    CHECK(lo_seen >= 0.10);
    CHECK(hi_seen < 1.80);

    double sum = 0.0;
    for (int i = 0; i < 1000000; ++i) sum += next_uniform(src, 0.0, 1.0);
    CHECK(std::abs(sum / 1e6 - 0.5) < 0.005);
}

TEST_CASE("next_uniform rejects an empty range") {
    auto src = derive_substream(1, {});
    CHECK_THROWS_AS(next_uniform(src, 1.0, 1.0), Error);
    CHECK_THROWS_AS(next_uniform(src, 2.0, 1.0), Error);
}

TEST_CASE("next_normal degenerate and invalid sd") {
    auto src = derive_substream(5, {});
    CHECK(next_normal(src, 0.0, 0.0) == 0.0);
    CHECK(next_normal(src, 1.25, 0.0) == 1.25);
    CHECK_THROWS_AS(next_normal(src, 0.0, -1.0), Error);
}

TEST_CASE("next_normal consumes one draw per deviate") {
    auto a = derive_substream(5, {1, 2, 3});
    auto b = a;
    next_normal(a, 0.0, 1.0);
    next_normal(a, 0.0, 0.0);
    b.next_u64();
    b.next_u64();
    CHECK(a == b);
}

TEST_CASE("next_normal moments") {
    auto src = derive_substream(kDefaultMasterSeed, {7, 0, 0});
    constexpr int n = 1000000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = next_normal(src, 0.0, 0.015);
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double sd = std::sqrt(s2 / n - mean * mean);
    CHECK(std::abs(sd - 0.015) < 0.0002);

    std::vector<double> z(n);
    for (auto& x : z) x = next_normal(src, 0.0, 1.0);
    double m = 0.0;
    for (double x : z) m += x;
    m /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double x : z) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    CHECK(std::abs(m3 / std::pow(m2, 1.5)) < 0.01);
}

TEST_CASE("normal_quantile reference values") {
    // Reference standard normal quantiles.
    CHECK(std::abs(normal_quantile(0.5)) < 1e-15);
    CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-9);
    CHECK(std::abs(normal_quantile(0.025) + 1.959963984540054) < 1e-9);
    CHECK(std::abs(normal_quantile(0.8413447460685429) - 1.0) < 1e-9);
    CHECK(std::abs(normal_quantile(0.99) - 2.326347874040841) < 1e-9);
    CHECK(std::abs(normal_quantile(1e-10) + 6.361340902404056) < 1e-9);
    CHECK(std::abs(normal_quantile(1.0 - 1e-10) - 6.361340889697422) < 1e-6);
    CHECK_THROWS_AS(normal_quantile(0.0), Error);
    CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("normal_quantile is monotone over a fine grid") {
    double prev = -1e9;
    for (int i = 1; i < 100000; ++i) {
        const double q = normal_quantile(i / 100000.0);
        CHECK(q > prev);
        prev = q;
    }
}

#pragma once

// Deterministic, splittable random streams.
//
// Every logical stream in an experiment (one noise variable of one trial) is
// derived from the master seed and a StreamId, so a trial draws the same
// numbers no matter which worker runs it or in what order.

#include <cstdint>

namespace ihr {

inline constexpr std::uint64_t kDefaultMasterSeed = 20240601ULL;

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

struct StreamId {
    std::uint16_t experiment_tag = 0;
    std::uint64_t trial_index = 0; // low 40 bits used
    std::uint8_t variable_tag = 0;

    // experiment_tag:16 | variable_tag:8 | trial_index:40
    std::uint64_t packed() const noexcept {
        return (std::uint64_t{experiment_tag} << 48) | (std::uint64_t{variable_tag} << 40) |
               (trial_index & ((std::uint64_t{1} << 40) - 1));
    }

    bool operator==(const StreamId&) const = default;
};

// Counter-based generator: the state advances by a Weyl increment and each
// output is mix64 of the new state. Single consumer; never share between
// workers.
class RandomSource {
public:
    explicit constexpr RandomSource(std::uint64_t state) noexcept : state_(state) {}

    constexpr std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() noexcept;

    // Uniform on (0, 1); never returns 0 or 1.
    double next_open_unit() noexcept;

    std::uint64_t state() const noexcept { return state_; }

    bool operator==(const RandomSource&) const = default;

private:
    std::uint64_t state_;
};

RandomSource derive_substream(std::uint64_t master_seed, StreamId stream) noexcept;

// Uniform on [lo, hi). Throws InvalidArgument unless lo < hi.
double next_uniform(RandomSource& source, double lo, double hi);

// One normal deviate per uniform draw via the inverse CDF. sd == 0 returns
// mean exactly (and still advances the source). Throws on sd < 0.
double next_normal(RandomSource& source, double mean, double sd);

// Standard normal quantile, |error| < 1e-9 over (0, 1).
double normal_quantile(double p);

} // namespace ihr

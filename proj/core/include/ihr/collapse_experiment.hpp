#pragma once

// Static-stress collapse study: sample (U, K) uniformly at fixed capacity,
// evaluate the stylized accuracy model, and group trials into equal-count
// ihr bins.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ihr/core.hpp"
#include "ihr/random.hpp"

namespace ihr {

inline constexpr std::uint16_t kExp1StreamTag = 1;

enum class Exp1Variable : std::uint8_t { Uncertainty = 0, Constraint = 1, AccuracyNoise = 2 };

struct Exp1Config {
    std::size_t n_trials = 400;
    double u_lo = 0.10;
    double u_hi = 1.80;
    double k_lo = 0.05;
    double k_hi = 0.90;
    double capacity_c = 1.0;
    DegradationParams degradation{};
    std::size_t n_bins = 8;
    std::uint64_t master_seed = kDefaultMasterSeed;

    // Throws ConfigValidation naming the violated invariant.
    void validate() const;

    bool operator==(const Exp1Config&) const = default;
};

struct TrialRecord {
    std::size_t trial_index = 0;
    double u = 0.0;
    double k = 0.0;
    double ihr = 0.0;
    double accuracy = 0.0;
    bool collapsed = false;

    bool operator==(const TrialRecord&) const = default;
};

// A bin covers (lower, upper]. upper is the largest ihr in the group; lower is
// the previous group's upper, or for the first bin the next double below its
// smallest ihr, so every trial falls inside its own half-open range.
struct BinSummary {
    double lower = 0.0;
    double upper = 0.0;
    double mean_ihr = 0.0;
    double collapse_prob = 0.0;
    std::size_t count = 0;
};

// Assemble a record from already-drawn environment and noise values.
TrialRecord evaluate_trial(const Exp1Config& config, std::size_t trial_index, double u, double k,
                           double noise_draw);

// Draws U, K and the accuracy noise from three substreams keyed by trial_index.
TrialRecord sample_trial(const Exp1Config& config, std::size_t trial_index);

std::vector<TrialRecord> run_experiment1(const Exp1Config& config, unsigned threads = 1);

double collapse_fraction(std::span<const TrialRecord> trials) noexcept;

// Sort by ihr (ties by trial_index) and split into n_bins contiguous groups;
// with n = q * n_bins + r the first r groups get q + 1 trials.
std::vector<BinSummary> quantile_bins(std::span<const TrialRecord> trials, std::size_t n_bins);

} // namespace ihr

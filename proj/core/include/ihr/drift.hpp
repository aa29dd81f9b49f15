#pragma once

// Time-stepped drift process:
//   U_t = clip(U0 + dU * t + eps_u),  K_t = clip(K0 + dK * t + eps_k)
// with independent N(0, sigma^2) deviations about the linear trend. Per-step
// collapse probability is the logistic collapse curve at ihr_t, and a
// collapse event is one Bernoulli draw of that probability.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ihr/controller.hpp"
#include "ihr/core.hpp"
#include "ihr/random.hpp"

namespace ihr {

inline constexpr std::uint16_t kExp2StreamTagBase = 0x0200; // + sweep level
inline constexpr std::uint16_t kExp3StreamTag = 3;

enum class DriftVariable : std::uint8_t { UncertaintyNoise = 0, ConstraintNoise = 1, CollapseEvent = 2 };

struct DriftConfig {
    double u0 = 0.55;
    double k0 = 0.35;
    double delta_u = 0.0025;
    double delta_k = 0.0015;
    double noise_sd = 0.0;
    std::size_t horizon_t = 120;
    double initial_c = 1.2;
    double clip_floor = kDefaultClipFloor;
    std::size_t n_runs = 400;
    std::uint64_t master_seed = kDefaultMasterSeed;
    LogisticModel collapse_model = LogisticModel::reference();
    std::uint16_t experiment_tag = kExp2StreamTagBase;

    void validate() const;

    bool operator==(const DriftConfig&) const = default;
};

// Noise-sensitivity defaults (sigma is swept).
DriftConfig noise_sweep_defaults();

// Controlled-vs-uncontrolled comparison defaults.
DriftConfig regulation_defaults();

// sigma = 0, 0.025, ..., 0.300
std::vector<double> default_sigma_grid();

struct Trajectory {
    std::size_t run_index = 0;
    std::vector<double> u;
    std::vector<double> k;
    std::vector<double> c;
    std::vector<double> ihr;
    std::vector<double> collapse_prob;
    std::vector<std::uint8_t> collapse_event;

    std::size_t size() const noexcept { return ihr.size(); }
};

struct RegimeStats {
    double mean_ihr = 0.0;
    double ihr_sd = 0.0; // population sd over all (run, step)
    double collapse_rate = 0.0; // mean collapse_prob over all (run, step)
    double frac_below_star = 0.0;
    double observed_collapse_rate = 0.0; // mean collapse_event
    std::size_t observations = 0;
};

struct SweepPoint {
    double sigma = 0.0;
    RegimeStats stats;
};

// With a controller, c_0 = initial_c and for t >= 1 the capacity is
// control_step(ihr_{t-1}, c_{t-1}) applied before ihr_t is computed.
Trajectory simulate_run(const DriftConfig& config, const std::optional<ControllerConfig>& controller,
                        std::size_t run_index);

std::vector<Trajectory> simulate_runs(const DriftConfig& config,
                                      const std::optional<ControllerConfig>& controller,
                                      unsigned threads = 1);

RegimeStats summarize_regime(std::span<const Trajectory> trajectories, double ihr_star);

// One sweep level per sigma, each on its own stream tag
// (base.experiment_tag + level). frac_below_star is measured against the
// collapse model's critical threshold.
std::vector<SweepPoint> run_noise_sweep(const DriftConfig& base, std::span<const double> sigmas,
                                        unsigned threads = 1);

} // namespace ihr

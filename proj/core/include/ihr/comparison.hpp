#pragma once

// Uncontrolled vs. proportionally controlled Monte Carlo comparison.

#include <cstddef>
#include <vector>

#include "ihr/controller.hpp"
#include "ihr/drift.hpp"

namespace ihr {

struct ArmStats {
    double mean_ihr = 0.0;
    double ihr_sd = 0.0;
    double mean_collapse_prob = 0.0;
    double observed_collapse_rate = 0.0;
    double frac_below_star = 0.0;
};

struct ComparisonReport {
    ArmStats uncontrolled;
    ArmStats controlled;
    std::size_t n_runs = 0;

    // Relative change (controlled - uncontrolled) / uncontrolled.
    static double relative_change(double before, double after) noexcept {
        return (after - before) / before;
    }
};

struct ComparisonOptions {
    // Paired arms replay the same environmental and event draws per run.
    // Unpaired runs give the controlled arm the next stream tag.
    bool paired = true;
    unsigned threads = 1;
    // Keep the per-run trajectories of both arms in the result.
    bool keep_trajectories = false;
};

struct ComparisonResult {
    ComparisonReport report;
    std::vector<Trajectory> uncontrolled_runs;
    std::vector<Trajectory> controlled_runs;
};

ComparisonResult run_comparison(const DriftConfig& drift, const ControllerConfig& ctrl,
                                std::size_t n_runs, const ComparisonOptions& options = {});

} // namespace ihr

#include "ihr/comparison.hpp"

#include <cstdint>
#include <utility>
#include <optional>

#include "ihr/error.hpp"

namespace ihr {

namespace {

ArmStats to_arm(const RegimeStats& s) {
    return {s.mean_ihr, s.ihr_sd, s.collapse_rate, s.observed_collapse_rate, s.frac_below_star};
}

} // namespace

ComparisonResult run_comparison(const DriftConfig& drift, const ControllerConfig& ctrl,
                                std::size_t n_runs, const ComparisonOptions& options) {
    IHR_REQUIRE(n_runs >= 1, ErrorCode::InvalidArgument, "run_comparison needs n_runs >= 1");
    drift.validate();
    ctrl.validate();

    DriftConfig base = drift;
    base.n_runs = n_runs;
    DriftConfig controlled_cfg = base;
    if (!options.paired) {
        controlled_cfg.experiment_tag = static_cast<std::uint16_t>(base.experiment_tag + 1);
    }

    const double ihr_star = critical_threshold(base.collapse_model);

    auto uncontrolled = simulate_runs(base, std::nullopt, options.threads);
    auto controlled = simulate_runs(controlled_cfg, ctrl, options.threads);

    ComparisonResult result;
    result.report.uncontrolled = to_arm(summarize_regime(uncontrolled, ihr_star));
    result.report.controlled = to_arm(summarize_regime(controlled, ihr_star));
    result.report.n_runs = n_runs;
    if (options.keep_trajectories) {
        result.uncontrolled_runs = std::move(uncontrolled);
        result.controlled_runs = std::move(controlled);
    }
    return result;
}

} // namespace ihr

#include "ihr/drift.hpp"

#include <cmath>

#include "ihr/error.hpp"
#include "ihr/parallel.hpp"

namespace ihr {

void DriftConfig::validate() const {
    IHR_REQUIRE(u0 + k0 > 0.0, ErrorCode::ConfigValidation, "u0 + k0 > 0 violated");
    IHR_REQUIRE(horizon_t >= 1, ErrorCode::ConfigValidation, "horizon_t >= 1 violated");
    IHR_REQUIRE(noise_sd >= 0.0, ErrorCode::ConfigValidation, "noise_sd >= 0 violated");
    IHR_REQUIRE(initial_c > 0.0, ErrorCode::ConfigValidation, "initial_c > 0 violated");
    IHR_REQUIRE(clip_floor > 0.0, ErrorCode::ConfigValidation, "clip_floor > 0 violated");
}

DriftConfig noise_sweep_defaults() { return DriftConfig{}; }

DriftConfig regulation_defaults() {
    DriftConfig cfg;
    cfg.delta_u = 0.0030;
    cfg.delta_k = 0.0020;
    cfg.noise_sd = 0.03;
    cfg.horizon_t = 150;
    cfg.initial_c = 1.15;
    cfg.n_runs = 300;
    cfg.experiment_tag = kExp3StreamTag;
    return cfg;
}

std::vector<double> default_sigma_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) {
        grid.push_back(i / 40.0);
    }
    return grid;
}

Trajectory simulate_run(const DriftConfig& config, const std::optional<ControllerConfig>& controller,
                        std::size_t run_index) {
    config.validate();
    if (controller) {
        controller->validate();
        IHR_REQUIRE(config.initial_c >= controller->c_min && config.initial_c <= controller->c_max,
                    ErrorCode::ConfigValidation, "initial_c within [c_min, c_max] violated");
    }

    auto stream = [&](DriftVariable v) {
        return derive_substream(config.master_seed, StreamId{config.experiment_tag, run_index,
                                                             static_cast<std::uint8_t>(v)});
    };
    auto u_src = stream(DriftVariable::UncertaintyNoise);
    auto k_src = stream(DriftVariable::ConstraintNoise);
    auto event_src = stream(DriftVariable::CollapseEvent);

    const std::size_t horizon = config.horizon_t;
    Trajectory tr;
    tr.run_index = run_index;
    tr.u.resize(horizon);
    tr.k.resize(horizon);
    tr.c.resize(horizon);
    tr.ihr.resize(horizon);
    tr.collapse_prob.resize(horizon);
    tr.collapse_event.resize(horizon);

    double c = config.initial_c;
    for (std::size_t t = 0; t < horizon; ++t) {
        const double step = static_cast<double>(t);
        const double u_raw = config.u0 + config.delta_u * step + next_normal(u_src, 0.0, config.noise_sd);
        const double k_raw = config.k0 + config.delta_k * step + next_normal(k_src, 0.0, config.noise_sd);
        const auto [u, k] = clip_environment(u_raw, k_raw, config.clip_floor);

        if (controller && t > 0) {
            c = control_step(*controller, tr.ihr[t - 1], c);
        }

        const double ihr = compute_ihr(SystemState{c, u, k});
        const double p = logistic_prob(config.collapse_model, ihr);

        tr.u[t] = u;
        tr.k[t] = k;
        tr.c[t] = c;
        tr.ihr[t] = ihr;
        tr.collapse_prob[t] = p;
        tr.collapse_event[t] = event_src.next_unit() < p ? 1 : 0;
    }
    return tr;
}

std::vector<Trajectory> simulate_runs(const DriftConfig& config,
                                      const std::optional<ControllerConfig>& controller,
                                      unsigned threads) {
    std::vector<Trajectory> runs(config.n_runs);
    parallel_for(config.n_runs, threads,
                 [&](std::size_t i) { runs[i] = simulate_run(config, controller, i); });
    return runs;
}

RegimeStats summarize_regime(std::span<const Trajectory> trajectories, double ihr_star) {
    IHR_REQUIRE(!trajectories.empty(), ErrorCode::EmptyInput, "summarize_regime requires runs");

    std::size_t n = 0;
    double sum = 0.0;
    double prob_sum = 0.0;
    std::size_t events = 0;
    std::size_t below = 0;
    for (const auto& tr : trajectories) {
        for (std::size_t t = 0; t < tr.size(); ++t) {
            sum += tr.ihr[t];
            prob_sum += tr.collapse_prob[t];
            events += tr.collapse_event[t];
            below += tr.ihr[t] < ihr_star ? 1 : 0;
        }
        n += tr.size();
    }
    IHR_REQUIRE(n > 0, ErrorCode::EmptyInput, "summarize_regime requires observations");

    const double count = static_cast<double>(n);
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& tr : trajectories) {
        for (double x : tr.ihr) {
            ss += (x - mean) * (x - mean);
        }
    }

    RegimeStats stats;
    stats.mean_ihr = mean;
    stats.ihr_sd = std::sqrt(ss / count);
    stats.collapse_rate = prob_sum / count;
    stats.frac_below_star = static_cast<double>(below) / count;
    stats.observed_collapse_rate = static_cast<double>(events) / count;
    stats.observations = n;
    return stats;
}

std::vector<SweepPoint> run_noise_sweep(const DriftConfig& base, std::span<const double> sigmas,
                                        unsigned threads) {
    IHR_REQUIRE(!sigmas.empty(), ErrorCode::InvalidArgument, "noise sweep needs at least one sigma");
    const double ihr_star = critical_threshold(base.collapse_model);

    std::vector<SweepPoint> points;
    points.reserve(sigmas.size());
    for (std::size_t level = 0; level < sigmas.size(); ++level) {
        DriftConfig cfg = base;
        cfg.noise_sd = sigmas[level];
        cfg.experiment_tag = static_cast<std::uint16_t>(base.experiment_tag + level);
        const auto runs = simulate_runs(cfg, std::nullopt, threads);
        points.push_back({sigmas[level], summarize_regime(runs, ihr_star)});
    }
    return points;
}

} // namespace ihr

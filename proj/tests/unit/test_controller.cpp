#include <doctest.h>

#include <cmath>
#include <random>

#include "ihr/comparison.hpp"
#include "ihr/controller.hpp"
#include "ihr/error.hpp"

using namespace ihr;

TEST_CASE("control_step examples") {
    const ControllerConfig ctrl;
    CHECK(control_step(ctrl, 1.20, 1.15) == 1.15);
    CHECK(control_step(ctrl, 1.10, 1.15) == doctest::Approx(1.158).epsilon(1e-12));
    CHECK(control_step(ctrl, 0.50, 1.79) == 1.80);
    CHECK(control_step(ctrl, 5.0, 0.71) == 0.70);
}

TEST_CASE("control_step bounds hold over random inputs") {
    const ControllerConfig ctrl;
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> ihr(0.0, 20.0), c(ctrl.c_min, ctrl.c_max);
    for (int i = 0; i < 100000; ++i) {
        const double c0 = c(gen);
        const double c1 = control_step(ctrl, ihr(gen), c0);
        CHECK(c1 >= ctrl.c_min);
        CHECK(c1 <= ctrl.c_max);
        CHECK(std::abs(c1 - c0) <= ctrl.max_step + 1e-15);
    }
}

TEST_CASE("zero drift converges geometrically to the target") {
    DriftConfig cfg = regulation_defaults();
    cfg.noise_sd = 0.0;
    cfg.delta_u = 0.0;
    cfg.delta_k = 0.0;
    cfg.initial_c = 1.0;
    cfg.horizon_t = 300;
    const ControllerConfig ctrl;
    const auto tr = simulate_run(cfg, ctrl, 0);
    const double demand = 0.9;
    const double ratio = 1.0 - ctrl.gain_kappa / demand;
    for (std::size_t t = 0; t + 1 < tr.size(); ++t) {
        const double e0 = ctrl.target_ihr - tr.ihr[t];
        const double e1 = ctrl.target_ihr - tr.ihr[t + 1];
        if (std::abs(e0) > 1e-5) {
            CHECK(std::abs(e1 / e0 - ratio) <= 1e-9);
        }
    }
    CHECK(std::abs(tr.ihr.back() - ctrl.target_ihr) < 1e-6);
}

TEST_CASE("controller timing and capacity bounds along a run") {
    const DriftConfig cfg = regulation_defaults();
    const ControllerConfig ctrl;
    const auto tr = simulate_run(cfg, ctrl, 3);
    CHECK(tr.c[0] == cfg.initial_c);
    for (std::size_t t = 1; t < tr.size(); ++t) {
        CHECK(tr.c[t] == control_step(ctrl, tr.ihr[t - 1], tr.c[t - 1]));
        CHECK(tr.c[t] >= ctrl.c_min);
        CHECK(tr.c[t] <= ctrl.c_max);
        CHECK(std::abs(tr.c[t] - tr.c[t - 1]) <= ctrl.max_step + 1e-15);
    }
    // Demand outgrows the ceiling: capacity ends pinned at c_max.
    CHECK(tr.c.back() == ctrl.c_max);
}

TEST_CASE("setpoint is a fixed point inside a run") {
    DriftConfig cfg = regulation_defaults();
    cfg.noise_sd = 0.0;
    cfg.delta_u = 0.0;
    cfg.delta_k = 0.0;
    cfg.u0 = 0.5;
    cfg.k0 = 0.5;
    cfg.initial_c = 1.2; // ihr_0 = 1.2 exactly
    const auto tr = simulate_run(cfg, ControllerConfig{}, 0);
    for (double c : tr.c) CHECK(c == 1.2);
}

TEST_CASE("paired arms share environmental draws") {
    DriftConfig cfg = regulation_defaults();
    ComparisonOptions opts;
    opts.keep_trajectories = true;
    const auto res = run_comparison(cfg, ControllerConfig{}, 20, opts);
    REQUIRE(res.controlled_runs.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(res.uncontrolled_runs[i].u == res.controlled_runs[i].u);
        CHECK(res.uncontrolled_runs[i].k == res.controlled_runs[i].k);
    }

    opts.paired = false;
    const auto unpaired = run_comparison(cfg, ControllerConfig{}, 20, opts);
    CHECK(unpaired.uncontrolled_runs[0].u != unpaired.controlled_runs[0].u);
    CHECK(unpaired.uncontrolled_runs[0].u == res.uncontrolled_runs[0].u);
}

TEST_CASE("controlled arm dominates on the default seed") {
    const auto res = run_comparison(regulation_defaults(), ControllerConfig{}, 300);
    const auto& r = res.report;
    CHECK(r.n_runs == 300);
    CHECK(r.controlled.mean_ihr > r.uncontrolled.mean_ihr);
    CHECK(r.controlled.ihr_sd < r.uncontrolled.ihr_sd);
    CHECK(r.controlled.observed_collapse_rate < r.uncontrolled.observed_collapse_rate);
    CHECK(res.uncontrolled_runs.empty());
}

TEST_CASE("ControllerConfig validation") {
    ControllerConfig c;
    c.gain_kappa = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.c_min = 2.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.max_step = -1.0;
    CHECK_THROWS_AS(c.validate(), Error);

    DriftConfig cfg = regulation_defaults();
    cfg.initial_c = 2.5;
    CHECK_THROWS_AS(simulate_run(cfg, ControllerConfig{}, 0), Error);
    CHECK_THROWS_AS(run_comparison(regulation_defaults(), ControllerConfig{}, 0), Error);
}

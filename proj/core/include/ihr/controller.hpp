#pragma once

// Proportional capacity controller: dC = gain * (target - ihr), with the
// per-step change and the capacity itself both clamped.

namespace ihr {

struct ControllerConfig {
    double gain_kappa = 0.08;
    double target_ihr = 1.20;
    double max_step = 0.04;
    double c_min = 0.70;
    double c_max = 1.80;

    void validate() const;

    bool operator==(const ControllerConfig&) const = default;
};

// Clamp order: the raw adjustment to [-max_step, max_step] first, then the
// new capacity to [c_min, c_max].
double control_step(const ControllerConfig& ctrl, double current_ihr, double current_c) noexcept;

} // namespace ihr

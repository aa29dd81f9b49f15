#include "ihr/controller.hpp"

#include <algorithm>

#include "ihr/error.hpp"

namespace ihr {

void ControllerConfig::validate() const {
    IHR_REQUIRE(gain_kappa > 0.0, ErrorCode::ConfigValidation, "gain_kappa > 0 violated");
    IHR_REQUIRE(max_step > 0.0, ErrorCode::ConfigValidation, "max_step > 0 violated");
    IHR_REQUIRE(c_min < c_max, ErrorCode::ConfigValidation, "c_min < c_max violated");
    IHR_REQUIRE(target_ihr > 0.0, ErrorCode::ConfigValidation, "target_ihr > 0 violated");
}

double control_step(const ControllerConfig& ctrl, double current_ihr, double current_c) noexcept {
    const double raw = ctrl.gain_kappa * (ctrl.target_ihr - current_ihr);
    const double delta = std::clamp(raw, -ctrl.max_step, ctrl.max_step);
    return std::clamp(current_c + delta, ctrl.c_min, ctrl.c_max);
}

} // namespace ihr

#include "ihr/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ihr/error.hpp"

namespace ihr {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DegenerateDenominator: return "degenerate denominator";
    case ErrorCode::InvalidModel: return "invalid model";
    case ErrorCode::EmptyInput: return "empty input";
    case ErrorCode::DegenerateOutcomes: return "degenerate outcomes";
    case ErrorCode::Separation: return "separation";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::ConfigParse: return "config parse error";
    case ErrorCode::ConfigValidation: return "config validation error";
    case ErrorCode::ConfigUnknownKey: return "unknown config key";
    case ErrorCode::Io: return "I/O error";
    }
    return "unknown error";
}

void DegradationParams::validate() const {
    IHR_REQUIRE(accuracy_noise_sd >= 0.0, ErrorCode::InvalidArgument,
                "accuracy_noise_sd >= 0 violated");
    IHR_REQUIRE(collapse_threshold > 0.0 && collapse_threshold < base_accuracy,
                ErrorCode::InvalidArgument,
                "collapse_threshold in (0, base_accuracy) violated");
}

LogisticModel::LogisticModel(double beta0, double beta1) : beta0_(beta0), beta1_(beta1) {
    IHR_REQUIRE(std::isfinite(beta0) && std::isfinite(beta1), ErrorCode::InvalidModel,
                "logistic coefficients must be finite");
    IHR_REQUIRE(beta1 < 0.0, ErrorCode::InvalidModel,
                "logistic slope beta1 must be negative, got " + std::to_string(beta1));
}

double compute_ihr(const SystemState& state) {
    const double demand = state.uncertainty_u + state.constraint_k;
    IHR_REQUIRE(demand > 0.0, ErrorCode::DegenerateDenominator,
                "U + K must be positive (state bypassed clipping?)");
    return state.capacity_c / demand;
}

double degraded_accuracy(const SystemState& state, const DegradationParams& params,
                         double noise_draw) noexcept {
    const double u = state.uncertainty_u;
    const double k = state.constraint_k;
    return params.base_accuracy - params.coef_u * u - params.coef_k * k -
           params.coef_interaction * (u * k) + noise_draw;
}

double stable_sigmoid(double z) noexcept {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) noexcept {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double logistic_prob(const LogisticModel& model, double ihr) noexcept {
    // Kept strictly inside (0, 1): clipping spikes push ihr into the hundreds,
    // where the sigmoid underflows to an exact zero.
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::clamp(stable_sigmoid(model.linear_predictor(ihr)), lo, hi);
}

double critical_threshold(const LogisticModel& model) {
    // Models built through the constructor already satisfy this.
    IHR_REQUIRE(model.beta1() < 0.0, ErrorCode::InvalidModel, "beta1 must be negative");
    return -model.beta0() / model.beta1();
}

std::pair<double, double> clip_environment(double u, double k, double clip_floor) {
    IHR_REQUIRE(clip_floor > 0.0, ErrorCode::InvalidArgument, "clip_floor must be positive");
    return {std::max(u, clip_floor), std::max(k, clip_floor)};
}

} // namespace ihr

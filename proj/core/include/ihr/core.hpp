#pragma once

// Value-level building blocks: the headroom ratio C / (U + K), the stylized
// accuracy model, the collapse predicate and the logistic collapse curve.

#include <utility>

namespace ihr {

inline constexpr double kDefaultClipFloor = 0.001;

struct SystemState {
    double capacity_c = 1.0;
    double uncertainty_u = 0.0;
    double constraint_k = 0.0;
};

// acc = acc0 - coef_u*U - coef_k*K - coef_interaction*U*K + eps
struct DegradationParams {
    double base_accuracy = 0.96;
    double coef_u = 0.22;
    double coef_k = 0.18;
    double coef_interaction = 0.28;
    double accuracy_noise_sd = 0.015;
    double collapse_threshold = 0.74;

    void validate() const;

    bool operator==(const DegradationParams&) const = default;
};

// P(collapse | ihr) = sigmoid(beta0 + beta1 * ihr). A usable collapse curve
// must fall with ihr, so beta1 < 0.
class LogisticModel {
public:
    LogisticModel(double beta0, double beta1);

    // The curve fitted to the 400-trial collapse study.
    static LogisticModel reference() { return {7.527, -6.303}; }

    double beta0() const noexcept { return beta0_; }
    double beta1() const noexcept { return beta1_; }

    double linear_predictor(double ihr) const noexcept { return beta0_ + beta1_ * ihr; }

    bool operator==(const LogisticModel&) const = default;

private:
    double beta0_;
    double beta1_;
};

// Throws ErrorCode::DegenerateDenominator when U + K <= 0.
double compute_ihr(const SystemState& state);

double degraded_accuracy(const SystemState& state, const DegradationParams& params,
                         double noise_draw) noexcept;

// Strict: accuracy equal to the threshold is not a collapse.
inline bool is_collapse(double accuracy, const DegradationParams& params) noexcept {
    return accuracy < params.collapse_threshold;
}

// Logistic function that never exponentiates a positive argument.
double stable_sigmoid(double z) noexcept;

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept;

double logistic_prob(const LogisticModel& model, double ihr) noexcept;

// The ihr at which logistic_prob is one half: -beta0 / beta1.
double critical_threshold(const LogisticModel& model);

std::pair<double, double> clip_environment(double u, double k,
                                           double clip_floor = kDefaultClipFloor);

} // namespace ihr

#pragma once

// Maximum-likelihood fit of P(collapse | ihr) = sigmoid(beta0 + beta1 * ihr)
// to binary outcomes.

#include <array>
#include <cstddef>
#include <span>

#include "ihr/core.hpp"

namespace ihr {

struct Outcome {
    double ihr = 0.0;
    bool collapsed = false;
};

struct FitResult {
    LogisticModel model = LogisticModel::reference();
    double ihr_star = 0.0;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

struct FitOptions {
    int max_iterations = 100;
    int max_halvings = 30;
    double step_tolerance = 1e-10;
    double gradient_tolerance = 1e-12;
    // A converged fit must also have a gradient this small.
    double accept_gradient = 1e-6;
    double max_abs_slope = 1e3;
};

// Bernoulli log-likelihood with the slope sign left free, so it can be
// evaluated at any (beta0, beta1) pair including the Newton start (0, 0).
double log_likelihood(double beta0, double beta1, std::span<const Outcome> outcomes) noexcept;

inline double log_likelihood(const LogisticModel& model,
                             std::span<const Outcome> outcomes) noexcept {
    return log_likelihood(model.beta0(), model.beta1(), outcomes);
}

// d(log-likelihood) / d(beta0, beta1).
std::array<double, 2> log_likelihood_gradient(double beta0, double beta1,
                                              std::span<const Outcome> outcomes) noexcept;

// Damped Newton-Raphson from (0, 0). Throws:
//   DegenerateOutcomes  all labels equal, or fewer than two distinct ihr values
//   Separation          |beta1| runs past max_abs_slope or the Hessian turns singular
//   NonConvergence      max_iterations exhausted
//   InvalidModel        the optimum has beta1 >= 0 (collapse rising with headroom)
FitResult fit_logistic(std::span<const Outcome> outcomes, const FitOptions& options = {});

} // namespace ihr

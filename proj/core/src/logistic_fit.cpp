#include "ihr/logistic_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ihr/error.hpp"

namespace ihr {

double log_likelihood(double beta0, double beta1, std::span<const Outcome> outcomes) noexcept {
    // y log p + (1 - y) log(1 - p) with log p = -softplus(-z), log(1-p) = -softplus(z)
    double ll = 0.0;
    for (const auto& o : outcomes) {
        const double z = beta0 + beta1 * o.ihr;
        ll -= o.collapsed ? softplus(-z) : softplus(z);
    }
    return ll;
}

std::array<double, 2> log_likelihood_gradient(double beta0, double beta1,
                                              std::span<const Outcome> outcomes) noexcept {
    std::array<double, 2> g{0.0, 0.0};
    for (const auto& o : outcomes) {
        const double resid = (o.collapsed ? 1.0 : 0.0) - stable_sigmoid(beta0 + beta1 * o.ihr);
        g[0] += resid;
        g[1] += resid * o.ihr;
    }
    return g;
}

namespace {

void check_outcomes(std::span<const Outcome> outcomes) {
    IHR_REQUIRE(!outcomes.empty(), ErrorCode::DegenerateOutcomes, "no outcomes to fit");
    const bool first = outcomes.front().collapsed;
    const bool mixed = std::any_of(outcomes.begin(), outcomes.end(),
                                   [&](const Outcome& o) { return o.collapsed != first; });
    IHR_REQUIRE(mixed, ErrorCode::DegenerateOutcomes,
                "all outcomes share one label; the likelihood is unbounded");
    const double x0 = outcomes.front().ihr;
    const bool spread = std::any_of(outcomes.begin(), outcomes.end(),
                                    [&](const Outcome& o) { return o.ihr != x0; });
    IHR_REQUIRE(spread, ErrorCode::DegenerateOutcomes, "need at least two distinct ihr values");

    // With one predictor the labels are (quasi-)separated exactly when the
    // two classes' ihr ranges touch at most at a single point.
    double pos_lo = std::numeric_limits<double>::infinity(), pos_hi = -pos_lo;
    double neg_lo = pos_lo, neg_hi = -pos_lo;
    for (const auto& o : outcomes) {
        if (o.collapsed) {
            pos_lo = std::min(pos_lo, o.ihr);
            pos_hi = std::max(pos_hi, o.ihr);
        } else {
            neg_lo = std::min(neg_lo, o.ihr);
            neg_hi = std::max(neg_hi, o.ihr);
        }
    }
    IHR_REQUIRE(pos_hi > neg_lo && neg_hi > pos_lo, ErrorCode::Separation,
                "collapsed and non-collapsed outcomes are separated by an ihr threshold; "
                "the MLE diverges");
}

double norm(const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); }

} // namespace

FitResult fit_logistic(std::span<const Outcome> outcomes, const FitOptions& options) {
    check_outcomes(outcomes);

    double b0 = 0.0;
    double b1 = 0.0;
    double ll = log_likelihood(b0, b1, outcomes);
    auto grad = log_likelihood_gradient(b0, b1, outcomes);

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        // Negative Hessian (Fisher information): sum w [1 x; x x^2].
        double h00 = 0.0, h01 = 0.0, h11 = 0.0;
        for (const auto& o : outcomes) {
            const double p = stable_sigmoid(b0 + b1 * o.ihr);
            const double w = p * (1.0 - p);
            h00 += w;
            h01 += w * o.ihr;
            h11 += w * o.ihr * o.ihr;
        }
        const double det = h00 * h11 - h01 * h01;
        const double scale = std::max(h00 * h11, std::numeric_limits<double>::min());
        IHR_REQUIRE(std::isfinite(det) && det > 1e-13 * scale, ErrorCode::Separation,
                    "Hessian numerically singular at iteration " + std::to_string(iter) +
                        " (quasi-complete separation)");

        double step0 = (h11 * grad[0] - h01 * grad[1]) / det;
        double step1 = (h00 * grad[1] - h01 * grad[0]) / det;

        double n0 = b0 + step0;
        double n1 = b1 + step1;
        double n_ll = log_likelihood(n0, n1, outcomes);
        for (int h = 0; h < options.max_halvings && !(n_ll >= ll); ++h) {
            step0 *= 0.5;
            step1 *= 0.5;
            n0 = b0 + step0;
            n1 = b1 + step1;
            n_ll = log_likelihood(n0, n1, outcomes);
        }
        if (!(n_ll >= ll)) {
            // No ascent direction left at this precision: stay put.
            n0 = b0;
            n1 = b1;
            n_ll = ll;
        }

        const double moved = std::hypot(n0 - b0, n1 - b1);
        b0 = n0;
        b1 = n1;
        ll = n_ll;
        grad = log_likelihood_gradient(b0, b1, outcomes);

        IHR_REQUIRE(std::abs(b1) <= options.max_abs_slope, ErrorCode::Separation,
                    "slope magnitude exceeded " + std::to_string(options.max_abs_slope) +
                        " (quasi-complete separation)");

        const double gnorm = norm(grad);
        if ((moved < options.step_tolerance || gnorm < options.gradient_tolerance) &&
            gnorm < options.accept_gradient) {
            IHR_REQUIRE(b1 < 0.0, ErrorCode::InvalidModel,
                        "fitted slope is non-negative: collapse does not fall with ihr");
            FitResult result;
            result.model = LogisticModel(b0, b1);
            result.ihr_star = critical_threshold(result.model);
            result.log_likelihood = ll;
            result.iterations = iter;
            result.converged = true;
            result.gradient_norm = gnorm;
            return result;
        }
    }
    throw Error(ErrorCode::NonConvergence,
                "logistic fit did not converge in " + std::to_string(options.max_iterations) +
                    " iterations");
}

} // namespace ihr

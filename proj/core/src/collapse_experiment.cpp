#include "ihr/collapse_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ihr/error.hpp"
#include "ihr/parallel.hpp"

namespace ihr {

void Exp1Config::validate() const {
    IHR_REQUIRE(u_lo < u_hi, ErrorCode::ConfigValidation, "u_lo < u_hi violated");
    IHR_REQUIRE(k_lo < k_hi, ErrorCode::ConfigValidation, "k_lo < k_hi violated");
    IHR_REQUIRE(u_lo + k_lo > 0.0, ErrorCode::ConfigValidation, "u_lo + k_lo > 0 violated");
    IHR_REQUIRE(capacity_c > 0.0, ErrorCode::ConfigValidation, "capacity_c > 0 violated");
    IHR_REQUIRE(n_bins >= 1, ErrorCode::ConfigValidation, "n_bins >= 1 violated");
    IHR_REQUIRE(n_bins <= n_trials || n_trials == 0, ErrorCode::ConfigValidation,
                "n_bins <= n_trials violated");
    try {
        degradation.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigValidation, e.what());
    }
}

TrialRecord evaluate_trial(const Exp1Config& config, std::size_t trial_index, double u, double k,
                           double noise_draw) {
    const SystemState state{config.capacity_c, u, k};
    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.u = u;
    rec.k = k;
    rec.ihr = compute_ihr(state);
    rec.accuracy = degraded_accuracy(state, config.degradation, noise_draw);
    rec.collapsed = is_collapse(rec.accuracy, config.degradation);
    return rec;
}

TrialRecord sample_trial(const Exp1Config& config, std::size_t trial_index) {
    auto stream = [&](Exp1Variable v) {
        return derive_substream(config.master_seed,
                                StreamId{kExp1StreamTag, trial_index, static_cast<std::uint8_t>(v)});
    };
    auto u_src = stream(Exp1Variable::Uncertainty);
    auto k_src = stream(Exp1Variable::Constraint);
    auto eps_src = stream(Exp1Variable::AccuracyNoise);

    const double u = next_uniform(u_src, config.u_lo, config.u_hi);
    const double k = next_uniform(k_src, config.k_lo, config.k_hi);
    const double eps = next_normal(eps_src, 0.0, config.degradation.accuracy_noise_sd);
    return evaluate_trial(config, trial_index, u, k, eps);
}

std::vector<TrialRecord> run_experiment1(const Exp1Config& config, unsigned threads) {
    config.validate();
    std::vector<TrialRecord> trials(config.n_trials);
    parallel_for(config.n_trials, threads,
                 [&](std::size_t i) { trials[i] = sample_trial(config, i); });
    return trials;
}

double collapse_fraction(std::span<const TrialRecord> trials) noexcept {
    if (trials.empty()) {
        return 0.0;
    }
    const auto n = std::count_if(trials.begin(), trials.end(),
                                 [](const TrialRecord& t) { return t.collapsed; });
    return static_cast<double>(n) / static_cast<double>(trials.size());
}

std::vector<BinSummary> quantile_bins(std::span<const TrialRecord> trials, std::size_t n_bins) {
    IHR_REQUIRE(!trials.empty(), ErrorCode::EmptyInput, "quantile_bins requires trials");
    IHR_REQUIRE(n_bins >= 1, ErrorCode::InvalidArgument, "quantile_bins requires n_bins >= 1");
    IHR_REQUIRE(n_bins <= trials.size(), ErrorCode::InvalidArgument,
                "quantile_bins requires n_bins <= number of trials");

    std::vector<std::size_t> order(trials.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (trials[a].ihr != trials[b].ihr) {
            return trials[a].ihr < trials[b].ihr;
        }
        return trials[a].trial_index < trials[b].trial_index;
    });

    const std::size_t q = trials.size() / n_bins;
    const std::size_t r = trials.size() % n_bins;

    std::vector<BinSummary> bins;
    bins.reserve(n_bins);
    std::size_t pos = 0;
    double lower =
        std::nextafter(trials[order.front()].ihr, -std::numeric_limits<double>::infinity());
    for (std::size_t b = 0; b < n_bins; ++b) {
        const std::size_t size = q + (b < r ? 1 : 0);
        double sum = 0.0;
        std::size_t collapsed = 0;
        for (std::size_t j = pos; j < pos + size; ++j) {
            const auto& t = trials[order[j]];
            sum += t.ihr;
            collapsed += t.collapsed ? 1 : 0;
        }
        BinSummary bin;
        bin.lower = lower;
        bin.upper = trials[order[pos + size - 1]].ihr;
        bin.mean_ihr = sum / static_cast<double>(size);
        bin.collapse_prob = static_cast<double>(collapsed) / static_cast<double>(size);
        bin.count = size;
        bins.push_back(bin);
        lower = bin.upper;
        pos += size;
    }
    return bins;
}

} // namespace ihr

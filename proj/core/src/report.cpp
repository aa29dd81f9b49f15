#include "ihr/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "ihr/error.hpp"

namespace ihr {

using nlohmann::json;

int exit_status_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ConfigParse:
    case ErrorCode::ConfigValidation:
    case ErrorCode::ConfigUnknownKey:
        return kExitUsage;
    case ErrorCode::Io:
        return kExitIo;
    default:
        return kExitRuntime;
    }
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw Error(ErrorCode::Io, "write failed for " + path.string());
    }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

// Fixed-point text for the console tables.
std::string fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string percent_change(double before, double after) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.1f%%", 100.0 * ComparisonReport::relative_change(before, after));
    return buf;
}

} // namespace

void emit_plot_data(std::span<const PlotSeries> series, const std::filesystem::path& path,
                    std::span<const std::string> metadata) {
    IHR_REQUIRE(!series.empty(), ErrorCode::EmptyInput, "plot data needs at least one series");
    std::ostringstream text;
    for (const auto& line : metadata) {
        text << "# " << line << "\n";
    }
    bool first = true;
    for (const auto& s : series) {
        IHR_REQUIRE(!s.points.empty(), ErrorCode::EmptyInput,
                    "plot series \"" + s.name + "\" is empty");
        for (std::size_t i = 1; i < s.points.size(); ++i) {
            IHR_REQUIRE(s.points[i].first > s.points[i - 1].first, ErrorCode::InvalidArgument,
                        "plot series \"" + s.name + "\" has non-increasing x at row " +
                            std::to_string(i));
        }
        if (!first) {
            text << "\n";
        }
        first = false;
        text << "# series: " << s.name << "\n" << s.x_label << "\t" << s.y_label << "\n";
        for (const auto& [x, y] : s.points) {
            text << format_number(x) << "\t" << format_number(y) << "\n";
        }
    }
    write_file(path, text.str());
}

std::string trials_csv(std::span<const TrialRecord> trials) {
    std::ostringstream os;
    os << "trial_index,u,k,ihr,accuracy,collapsed\n";
    for (const auto& t : trials) {
        os << t.trial_index << ',' << format_number(t.u) << ',' << format_number(t.k) << ','
           << format_number(t.ihr) << ',' << format_number(t.accuracy) << ','
           << (t.collapsed ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string bins_csv(std::span<const BinSummary> bins) {
    std::ostringstream os;
    os << "bin,lower,upper,mean_ihr,collapse_prob,count\n";
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const auto& b = bins[i];
        os << i + 1 << ',' << format_number(b.lower) << ',' << format_number(b.upper) << ','
           << format_number(b.mean_ihr) << ',' << format_number(b.collapse_prob) << ',' << b.count
           << '\n';
    }
    return os.str();
}

std::string sweep_csv(std::span<const SweepPoint> points) {
    std::ostringstream os;
    os << "sigma,mean_ihr,ihr_sd,collapse_rate,frac_below_star,observed_collapse_rate,observations\n";
    for (const auto& p : points) {
        const auto& s = p.stats;
        os << format_number(p.sigma) << ',' << format_number(s.mean_ihr) << ','
           << format_number(s.ihr_sd) << ',' << format_number(s.collapse_rate) << ','
           << format_number(s.frac_below_star) << ',' << format_number(s.observed_collapse_rate)
           << ',' << s.observations << '\n';
    }
    return os.str();
}

std::string comparison_csv(const ComparisonReport& r) {
    std::ostringstream os;
    os << "metric,uncontrolled,controlled,change_pct\n";
    auto row = [&](const char* name, double a, double b) {
        os << name << ',' << format_number(a) << ',' << format_number(b) << ','
           << format_number(100.0 * ComparisonReport::relative_change(a, b)) << '\n';
    };
    row("mean_ihr", r.uncontrolled.mean_ihr, r.controlled.mean_ihr);
    row("ihr_sd", r.uncontrolled.ihr_sd, r.controlled.ihr_sd);
    row("mean_collapse_prob", r.uncontrolled.mean_collapse_prob, r.controlled.mean_collapse_prob);
    row("observed_collapse_rate", r.uncontrolled.observed_collapse_rate,
        r.controlled.observed_collapse_rate);
    return os.str();
}

namespace {

json arm_json(const ArmStats& a) {
    return {{"mean_ihr", a.mean_ihr},
            {"ihr_sd", a.ihr_sd},
            {"mean_collapse_prob", a.mean_collapse_prob},
            {"observed_collapse_rate", a.observed_collapse_rate},
            {"frac_below_star", a.frac_below_star}};
}

void run_exp1(const ExperimentSuiteConfig& cfg, unsigned threads, std::ostream& out) {
    const auto& dir = cfg.output_dir;
    const auto trials = run_experiment1(cfg.exp1, threads);
    const auto bins = quantile_bins(trials, cfg.exp1.n_bins);

    std::vector<Outcome> outcomes;
    outcomes.reserve(trials.size());
    for (const auto& t : trials) {
        outcomes.push_back({t.ihr, t.collapsed});
    }
    const FitResult fit = fit_logistic(outcomes);
    const double fraction = collapse_fraction(trials);
    std::size_t events = 0;
    for (const auto& t : trials) {
        events += t.collapsed ? 1 : 0;
    }

    if (writes_csv(cfg.format)) {
        write_file(dir / "exp1_trials.csv", trials_csv(trials));
        write_file(dir / "exp1_bins.csv", bins_csv(bins));
    }
    if (writes_json(cfg.format)) {
        json jbins = json::array();
        for (const auto& b : bins) {
            jbins.push_back({{"lower", b.lower},
                             {"upper", b.upper},
                             {"mean_ihr", b.mean_ihr},
                             {"collapse_prob", b.collapse_prob},
                             {"count", b.count}});
        }
        json j = {{"beta0", fit.model.beta0()},
                  {"beta1", fit.model.beta1()},
                  {"ihr_star", fit.ihr_star},
                  {"log_likelihood", fit.log_likelihood},
                  {"iterations", fit.iterations},
                  {"converged", fit.converged},
                  {"gradient_norm", fit.gradient_norm},
                  {"n_trials", trials.size()},
                  {"collapse_events", events},
                  {"collapse_fraction", fraction},
                  {"master_seed", cfg.exp1.master_seed},
                  {"bins", jbins}};
        write_file(dir / "exp1_fit.json", dump_json(j));
    }

    PlotSeries bin_points{"bin_collapse_probability", "mean_ihr", "collapse_prob", {}};
    for (const auto& b : bins) {
        bin_points.points.emplace_back(b.mean_ihr, b.collapse_prob);
    }
    emit_plot_data(std::span(&bin_points, 1), dir / "fig1.dat");

    PlotSeries curve{"logistic_fit", "ihr", "collapse_prob", {}};
    for (int i = 30; i <= 450; ++i) {
        const double x = i / 100.0;
        curve.points.emplace_back(x, logistic_prob(fit.model, x));
    }
    const std::vector<PlotSeries> fig2{curve, bin_points};
    const std::vector<std::string> meta{"marker: ihr_star=" + format_number(fit.ihr_star),
                                        "beta0=" + format_number(fit.model.beta0()) +
                                            " beta1=" + format_number(fit.model.beta1())};
    emit_plot_data(fig2, dir / "fig2.dat", meta);

    out << "Experiment 1: collapse probability by IHR bin (seed " << cfg.exp1.master_seed << ")\n";
    out << "  bin  range                 mean IHR  collapse  count\n";
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const auto& b = bins[i];
        char line[128];
        std::snprintf(line, sizeof line, "  %3zu  (%6.3f, %6.3f]  %8.3f  %8.2f  %5zu\n", i + 1,
                      b.lower, b.upper, b.mean_ihr, b.collapse_prob, b.count);
        out << line;
    }
    out << "  collapse fraction " << fixed(fraction, 4) << " (" << events << "/" << trials.size()
        << "), beta0 " << fixed(fit.model.beta0(), 3) << ", beta1 " << fixed(fit.model.beta1(), 3)
        << ", IHR* " << fixed(fit.ihr_star, 3) << "\n\n";
}

void run_exp2(const ExperimentSuiteConfig& cfg, unsigned threads, std::ostream& out) {
    const auto& dir = cfg.output_dir;
    const auto points = run_noise_sweep(cfg.exp2.drift, cfg.exp2.sigmas, threads);
    const double ihr_star = critical_threshold(cfg.exp2.drift.collapse_model);

    if (writes_csv(cfg.format)) {
        write_file(dir / "exp2_sweep.csv", sweep_csv(points));
    }
    if (writes_json(cfg.format)) {
        json rows = json::array();
        for (const auto& p : points) {
            rows.push_back({{"sigma", p.sigma},
                            {"mean_ihr", p.stats.mean_ihr},
                            {"ihr_sd", p.stats.ihr_sd},
                            {"collapse_rate", p.stats.collapse_rate},
                            {"frac_below_star", p.stats.frac_below_star},
                            {"observed_collapse_rate", p.stats.observed_collapse_rate},
                            {"observations", p.stats.observations}});
        }
        json j = {{"ihr_star", ihr_star},
                  {"master_seed", cfg.exp2.drift.master_seed},
                  {"levels", rows}};
        write_file(dir / "exp2_sweep.json", dump_json(j));
    }

    std::vector<PlotSeries> fig3{{"mean_ihr", "sigma", "mean_ihr", {}},
                                 {"ihr_sd", "sigma", "ihr_sd", {}},
                                 {"collapse_rate", "sigma", "collapse_rate", {}},
                                 {"frac_below_star", "sigma", "frac_below_star", {}}};
    for (const auto& p : points) {
        fig3[0].points.emplace_back(p.sigma, p.stats.mean_ihr);
        fig3[1].points.emplace_back(p.sigma, p.stats.ihr_sd);
        fig3[2].points.emplace_back(p.sigma, p.stats.collapse_rate);
        fig3[3].points.emplace_back(p.sigma, p.stats.frac_below_star);
    }
    emit_plot_data(fig3, dir / "fig3.dat",
                   std::vector<std::string>{"ihr_star=" + format_number(ihr_star)});

    out << "Experiment 2: noise sensitivity (" << cfg.exp2.drift.n_runs << " runs x "
        << cfg.exp2.drift.horizon_t << " steps per level, IHR* " << fixed(ihr_star, 3) << ")\n";
    out << "  sigma  mean IHR   IHR sd  collapse  below IHR*\n";
    for (const auto& p : points) {
        char line[128];
        std::snprintf(line, sizeof line, "  %5.3f  %8.3f  %7.3f  %8.3f  %10.3f\n", p.sigma,
                      p.stats.mean_ihr, p.stats.ihr_sd, p.stats.collapse_rate,
                      p.stats.frac_below_star);
        out << line;
    }
    out << "\n";
}

void run_exp3(const ExperimentSuiteConfig& cfg, unsigned threads, std::ostream& out) {
    const auto& dir = cfg.output_dir;
    ComparisonOptions opts;
    opts.paired = cfg.exp3.paired;
    opts.threads = threads;
    opts.keep_trajectories = cfg.exp3.dump_single_run;
    const auto result =
        run_comparison(cfg.exp3.drift, cfg.exp3.controller, cfg.exp3.drift.n_runs, opts);
    const auto& r = result.report;

    if (writes_csv(cfg.format)) {
        write_file(dir / "exp3_comparison.csv", comparison_csv(r));
    }
    if (writes_json(cfg.format)) {
        json j = {{"n_runs", r.n_runs},
                  {"paired", cfg.exp3.paired},
                  {"master_seed", cfg.exp3.drift.master_seed},
                  {"uncontrolled", arm_json(r.uncontrolled)},
                  {"controlled", arm_json(r.controlled)},
                  {"collapse_rate_reduction_pp",
                   100.0 * (r.uncontrolled.observed_collapse_rate - r.controlled.observed_collapse_rate)},
                  {"ihr_sd_reduction_pct",
                   -100.0 * ComparisonReport::relative_change(r.uncontrolled.ihr_sd, r.controlled.ihr_sd)}};
        write_file(dir / "exp3_comparison.json", dump_json(j));
    }
    if (cfg.exp3.dump_single_run && !result.controlled_runs.empty()) {
        const auto& a = result.uncontrolled_runs.front();
        const auto& b = result.controlled_runs.front();
        std::ostringstream os;
        os << "t,u_uncontrolled,k_uncontrolled,c_uncontrolled,ihr_uncontrolled,"
              "u_controlled,k_controlled,c_controlled,ihr_controlled\n";
        for (std::size_t t = 0; t < a.size(); ++t) {
            os << t << ',' << format_number(a.u[t]) << ',' << format_number(a.k[t]) << ','
               << format_number(a.c[t]) << ',' << format_number(a.ihr[t]) << ','
               << format_number(b.u[t]) << ',' << format_number(b.k[t]) << ','
               << format_number(b.c[t]) << ',' << format_number(b.ihr[t]) << '\n';
        }
        write_file(dir / "exp3_single_run.csv", os.str());
    }

    out << "Experiment 3: uncontrolled vs controlled (" << r.n_runs << " runs per arm"
        << (cfg.exp3.paired ? ", paired" : "") << ")\n";
    out << "  metric                  uncontrolled  controlled  change\n";
    auto row = [&](const char* name, double a, double b) {
        char line[128];
        std::snprintf(line, sizeof line, "  %-22s  %12.3f  %10.3f  %s\n", name, a, b,
                      percent_change(a, b).c_str());
        out << line;
    };
    row("Mean IHR", r.uncontrolled.mean_ihr, r.controlled.mean_ihr);
    row("IHR sd", r.uncontrolled.ihr_sd, r.controlled.ihr_sd);
    row("Mean collapse prob.", r.uncontrolled.mean_collapse_prob, r.controlled.mean_collapse_prob);
    row("Observed collapse rate", r.uncontrolled.observed_collapse_rate,
        r.controlled.observed_collapse_rate);
    out << "\n";
}

template <typename Fn>
int guarded(const char* stage, std::ostream& err, Fn&& fn) {
    try {
        fn();
        return kExitOk;
    } catch (const Error& e) {
        err << stage << ": " << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_status_for(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        err << stage << ": I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << stage << ": " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace

int run_suite(const ExperimentSuiteConfig& config, Selection selection, const SuiteOptions& options,
              std::ostream& out, std::ostream& err) {
    if (selection.empty()) {
        out << "nothing selected\n";
        return kExitOk;
    }
    if (int rc = guarded("config", err, [&] { config.validate(); }); rc != kExitOk) {
        return rc;
    }
    if (int rc = guarded("output", err,
                         [&] {
                             std::error_code ec;
                             std::filesystem::create_directories(config.output_dir, ec);
                             if (ec || !std::filesystem::is_directory(config.output_dir)) {
                                 throw Error(ErrorCode::Io, "cannot create output directory " +
                                                                config.output_dir.string() +
                                                                (ec ? ": " + ec.message() : ""));
                             }
                         });
        rc != kExitOk) {
        return rc;
    }

    const unsigned threads = options.threads;
    if (selection.exp1) {
        if (int rc = guarded("exp1", err, [&] { run_exp1(config, threads, out); }); rc != kExitOk) {
            return rc;
        }
    }
    if (selection.exp2) {
        if (int rc = guarded("exp2", err, [&] { run_exp2(config, threads, out); }); rc != kExitOk) {
            return rc;
        }
    }
    if (selection.exp3) {
        if (int rc = guarded("exp3", err, [&] { run_exp3(config, threads, out); }); rc != kExitOk) {
            return rc;
        }
    }
    return kExitOk;
}

} // namespace ihr

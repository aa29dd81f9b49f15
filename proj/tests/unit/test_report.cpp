#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ihr/error.hpp"
#include "ihr/report.hpp"
#include "support/temp_dir.hpp"

using namespace ihr;
using ihr::test::slurp;
using ihr::test::TempDir;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// A cheap suite: full-size exp1, reduced exp2/exp3.
ExperimentSuiteConfig small_suite(const std::filesystem::path& dir) {
    ExperimentSuiteConfig cfg;
    cfg.output_dir = dir;
    cfg.exp2.drift.n_runs = 20;
    cfg.exp2.sigmas = {0.0, 0.1, 0.3};
    cfg.exp3.drift.n_runs = 20;
    cfg.exp3.dump_single_run = true;
    return cfg;
}

std::set<std::string> files_in(const std::filesystem::path& dir) {
    std::set<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(dir)) names.insert(e.path().filename().string());
    return names;
}

} // namespace

TEST_CASE("format_number uses six significant digits") {
    CHECK(format_number(1.0 / 3.0) == "0.333333");
    CHECK(format_number(1234567.0) == "1.23457e+06");
    CHECK(format_number(0.775) == "0.775");
    CHECK(format_number(0.0) == "0");
}

TEST_CASE("emit_plot_data layout") {
    TempDir dir("plot");
    std::vector<PlotSeries> series{{"curve", "ihr", "p", {{0.5, 0.9}, {1.0, 0.5}, {2.0, 1.0 / 3.0}}},
                                   {"dots", "ihr", "p", {{0.7, 1.0}}}};
    const std::vector<std::string> meta{"marker: ihr_star=1.19419"};
    emit_plot_data(series, dir.path() / "f.dat", meta);
    const auto lines = lines_of(slurp(dir.path() / "f.dat"));
    const std::vector<std::string> expected{"# marker: ihr_star=1.19419",
                                            "# series: curve",
                                            "ihr\tp",
                                            "0.5\t0.9",
                                            "1\t0.5",
                                            "2\t0.333333",
                                            "",
                                            "# series: dots",
                                            "ihr\tp",
                                            "0.7\t1"};
    CHECK(lines == expected);
}

TEST_CASE("emit_plot_data errors") {
    TempDir dir("plot_err");
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK_THROWS_AS(emit_plot_data(std::vector<PlotSeries>{}, dir.path() / "a.dat"), Error);
    CHECK(code([&] { emit_plot_data(std::vector<PlotSeries>{{"e", "x", "y", {}}}, dir.path() / "a.dat"); }) ==
          ErrorCode::EmptyInput);
    const std::vector<PlotSeries> bad{{"s", "x", "y", {{1.0, 0.0}, {1.0, 1.0}}}};
    CHECK(code([&] { emit_plot_data(bad, dir.path() / "a.dat"); }) == ErrorCode::InvalidArgument);
    const std::vector<PlotSeries> ok{{"s", "x", "y", {{1.0, 0.0}}}};
    CHECK(code([&] { emit_plot_data(ok, dir.path() / "missing" / "a.dat"); }) == ErrorCode::Io);
}

TEST_CASE("run_suite with nothing selected") {
    TempDir dir("none");
    auto cfg = small_suite(dir.path() / "out");
    std::ostringstream out, err;
    CHECK(run_suite(cfg, Selection{}, {}, out, err) == kExitOk);
    CHECK(out.str().find("nothing selected") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(dir.path() / "out"));
}

TEST_CASE("run_suite exp1 artifacts") {
    TempDir dir("exp1");
    auto cfg = small_suite(dir.path());
    std::ostringstream out, err;
    REQUIRE(run_suite(cfg, Selection{true, false, false}, {}, out, err) == kExitOk);
    CHECK(files_in(dir.path()) ==
          std::set<std::string>{"exp1_trials.csv", "exp1_bins.csv", "exp1_fit.json", "fig1.dat", "fig2.dat"});
    CHECK(out.str().find("collapse fraction") != std::string::npos);
    CHECK(out.str().find("IHR*") != std::string::npos);

    const auto trials = lines_of(slurp(dir.path() / "exp1_trials.csv"));
    CHECK(trials.front() == "trial_index,u,k,ihr,accuracy,collapsed");
    CHECK(trials.size() == 401);
    for (const auto& l : trials) CHECK(std::count(l.begin(), l.end(), ',') == 5);

    const auto bins = lines_of(slurp(dir.path() / "exp1_bins.csv"));
    CHECK(bins.size() == 9);
    for (const auto& l : bins) CHECK(std::count(l.begin(), l.end(), ',') == 5);

    const auto fit = nlohmann::json::parse(slurp(dir.path() / "exp1_fit.json"));
    for (const char* key : {"beta0", "beta1", "ihr_star", "log_likelihood", "iterations", "converged"}) {
        CHECK(fit.contains(key));
    }
    CHECK(fit["converged"].get<bool>());
    CHECK(fit["bins"].size() == 8);

    const auto fig2 = slurp(dir.path() / "fig2.dat");
    CHECK(fig2.rfind("# marker: ihr_star=", 0) == 0);
}

TEST_CASE("run_suite all artifacts and csv-only format") {
    TempDir dir("all");
    auto cfg = small_suite(dir.path() / "both");
    std::ostringstream out, err;
    REQUIRE(run_suite(cfg, Selection::all(), {}, out, err) == kExitOk);
    CHECK(files_in(cfg.output_dir) ==
          std::set<std::string>{"exp1_trials.csv", "exp1_bins.csv", "exp1_fit.json", "exp2_sweep.csv",
                                "exp2_sweep.json", "exp3_comparison.csv", "exp3_comparison.json",
                                "exp3_single_run.csv", "fig1.dat", "fig2.dat", "fig3.dat"});
    const auto sweep = lines_of(slurp(cfg.output_dir / "exp2_sweep.csv"));
    CHECK(sweep.size() == 4);
    const auto cmp = nlohmann::json::parse(slurp(cfg.output_dir / "exp3_comparison.json"));
    CHECK(cmp["uncontrolled"].contains("mean_collapse_prob"));
    CHECK(cmp["n_runs"].get<int>() == 20);
    const auto single = lines_of(slurp(cfg.output_dir / "exp3_single_run.csv"));
    CHECK(single.size() == 151);

    cfg.output_dir = dir.path() / "csv";
    cfg.format = OutputFormat::Csv;
    REQUIRE(run_suite(cfg, Selection::all(), {}, out, err) == kExitOk);
    for (const auto& name : files_in(cfg.output_dir)) {
        CHECK(name.find(".json") == std::string::npos);
    }
}

TEST_CASE("run_suite is byte-stable across repeats and thread counts") {
    TempDir dir("det");
    auto a = small_suite(dir.path() / "a");
    auto b = small_suite(dir.path() / "b");
    std::ostringstream out, err;
    REQUIRE(run_suite(a, Selection::all(), {1}, out, err) == kExitOk);
    REQUIRE(run_suite(b, Selection::all(), {4}, out, err) == kExitOk);
    const auto names = files_in(a.output_dir);
    CHECK(names == files_in(b.output_dir));
    for (const auto& n : names) {
        CHECK_MESSAGE(slurp(a.output_dir / n) == slurp(b.output_dir / n), n);
    }
}

TEST_CASE("run_suite reports an unwritable output directory") {
    TempDir dir("io");
    {
        std::ofstream f(dir.path() / "plain_file");
        f << "x";
    }
    auto cfg = small_suite(dir.path() / "plain_file" / "out");
    std::ostringstream out, err;
    CHECK(run_suite(cfg, Selection{true, false, false}, {}, out, err) == kExitIo);
    CHECK(err.str().find((dir.path() / "plain_file" / "out").string()) != std::string::npos);
}

TEST_CASE("run_suite maps numeric failures to the runtime status") {
    TempDir dir("numeric");
    auto cfg = small_suite(dir.path());
    // Noise-free accuracy with every configuration collapsing: the fit is degenerate.
    cfg.exp1.u_lo = 1.5;
    cfg.exp1.degradation.accuracy_noise_sd = 0.0;
    std::ostringstream out, err;
    CHECK(run_suite(cfg, Selection{true, false, false}, {}, out, err) == kExitRuntime);
    CHECK(err.str().find("exp1") != std::string::npos);

    cfg = small_suite(dir.path());
    cfg.exp1.k_hi = 0.0;
    CHECK(run_suite(cfg, Selection{true, false, false}, {}, out, err) == kExitUsage);
}

TEST_CASE("exit status mapping") {
    CHECK(exit_status_for(ErrorCode::ConfigUnknownKey) == 1);
    CHECK(exit_status_for(ErrorCode::Separation) == 2);
    CHECK(exit_status_for(ErrorCode::Io) == 3);
}

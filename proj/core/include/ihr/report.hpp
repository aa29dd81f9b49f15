#pragma once

// Experiment orchestration and artifact emission.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ihr/collapse_experiment.hpp"
#include "ihr/comparison.hpp"
#include "ihr/config.hpp"
#include "ihr/drift.hpp"
#include "ihr/error.hpp"
#include "ihr/logistic_fit.hpp"

namespace ihr {

enum ExitStatus : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitRuntime = 2,
    kExitIo = 3,
};

int exit_status_for(ErrorCode code) noexcept;

struct Selection {
    bool exp1 = false;
    bool exp2 = false;
    bool exp3 = false;

    static Selection all() { return {true, true, true}; }
    bool empty() const noexcept { return !exp1 && !exp2 && !exp3; }
};

struct PlotSeries {
    std::string name;
    std::string x_label = "x";
    std::string y_label = "y";
    std::vector<std::pair<double, double>> points;
};

// Six significant digits, as used in CSV and plot-data output.
std::string format_number(double value);

// Tab-separated blocks, one per series:
//   # <metadata line>...
//   # series: <name>
//   <x_label>\t<y_label>
//   <x>\t<y>...
// Blocks are separated by a blank line. x must be strictly increasing within
// each series. Throws EmptyInput, InvalidArgument or Io.
void emit_plot_data(std::span<const PlotSeries> series, const std::filesystem::path& path,
                    std::span<const std::string> metadata = {});

std::string trials_csv(std::span<const TrialRecord> trials);
std::string bins_csv(std::span<const BinSummary> bins);
std::string sweep_csv(std::span<const SweepPoint> points);
std::string comparison_csv(const ComparisonReport& report);

struct SuiteOptions {
    unsigned threads = 1;
};

// Runs the selected experiments and writes their artifacts under
// config.output_dir. Returns a process exit status; errors are reported on
// `err` with the experiment and, for I/O failures, the path.
int run_suite(const ExperimentSuiteConfig& config, Selection selection, const SuiteOptions& options,
              std::ostream& out, std::ostream& err);

} // namespace ihr

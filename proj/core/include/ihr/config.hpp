#pragma once

// Suite configuration. Every field defaults to the reference
// parameterization; unknown keys are rejected.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ihr/collapse_experiment.hpp"
#include "ihr/controller.hpp"
#include "ihr/drift.hpp"

namespace ihr {

enum class OutputFormat : std::uint8_t { Csv, Json, Both };

std::string_view to_string(OutputFormat format) noexcept;
OutputFormat parse_output_format(std::string_view text);

inline bool writes_csv(OutputFormat f) noexcept { return f != OutputFormat::Json; }
inline bool writes_json(OutputFormat f) noexcept { return f != OutputFormat::Csv; }

struct NoiseSweepSettings {
    DriftConfig drift = noise_sweep_defaults();
    std::vector<double> sigmas = default_sigma_grid();

    bool operator==(const NoiseSweepSettings&) const = default;
};

struct RegulationSettings {
    DriftConfig drift = regulation_defaults();
    ControllerConfig controller{};
    bool paired = true;
    // Also write both arms of run 0 step by step.
    bool dump_single_run = false;

    bool operator==(const RegulationSettings&) const = default;
};

struct ExperimentSuiteConfig {
    std::uint64_t master_seed = kDefaultMasterSeed;
    Exp1Config exp1{};
    NoiseSweepSettings exp2{};
    RegulationSettings exp3{};
    std::filesystem::path output_dir = "ihr_output";
    OutputFormat format = OutputFormat::Both;

    // Pushes master_seed into every nested experiment config.
    void set_master_seed(std::uint64_t seed) noexcept;

    // Throws ConfigValidation naming the violated invariant.
    void validate() const;

    bool operator==(const ExperimentSuiteConfig&) const = default;
};

// Parses a JSON document. Throws Error with ConfigParse (with line and
// column), ConfigUnknownKey (naming the dotted key) or ConfigValidation.
ExperimentSuiteConfig parse_config(std::string_view source);

ExperimentSuiteConfig load_config(const std::filesystem::path& path);

// Pretty-printed JSON holding every field; parse_config of this text returns
// an equal config.
std::string serialize_config(const ExperimentSuiteConfig& config);

} // namespace ihr

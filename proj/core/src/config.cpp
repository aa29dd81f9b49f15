#include "ihr/config.hpp"

#include <algorithm>
#include <concepts>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ihr/error.hpp"

namespace ihr {

using nlohmann::json;

std::string_view to_string(OutputFormat format) noexcept {
    switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
    }
    return "both";
}

OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    if (text == "both") return OutputFormat::Both;
    throw Error(ErrorCode::ConfigValidation,
                "format must be one of csv, json, both (got \"" + std::string(text) + "\")");
}

void ExperimentSuiteConfig::set_master_seed(std::uint64_t seed) noexcept {
    master_seed = seed;
    exp1.master_seed = seed;
    exp2.drift.master_seed = seed;
    exp3.drift.master_seed = seed;
}

namespace {

template <typename Fn>
void with_context(const std::string& where, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigValidation, where + ": " + e.what());
    }
}

// Reads known keys from one JSON object and rejects everything else.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw Error(ErrorCode::ConfigValidation, where() + " must be a JSON object");
        }
    }

    const json* find(const std::string& key) {
        known_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void read(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            require(v->is_number(), key, "a number");
            out = v->get<double>();
        }
    }

    template <std::unsigned_integral T>
    void read(const std::string& key, T& out) {
        if (const json* v = find(key)) {
            require(v->is_number_unsigned(), key, "a non-negative integer");
            out = v->get<T>();
        }
    }

    void read(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            require(v->is_boolean(), key, "a boolean");
            out = v->get<bool>();
        }
    }

    void read(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            require(v->is_string(), key, "a string");
            out = v->get<std::string>();
        }
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    // Call after all reads.
    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!known_.contains(it.key())) {
                throw Error(ErrorCode::ConfigUnknownKey,
                            "unknown configuration key \"" + child(it.key()) + "\"");
            }
        }
    }

private:
    std::string where() const { return path_.empty() ? "config" : "\"" + path_ + "\""; }

    void require(bool ok, const std::string& key, const char* what) const {
        if (!ok) {
            throw Error(ErrorCode::ConfigValidation, "\"" + child(key) + "\" must be " + what);
        }
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> known_;
};

void read_degradation(ObjectReader& parent, const std::string& key, DegradationParams& p) {
    const json* v = parent.find(key);
    if (!v) return;
    ObjectReader r(*v, parent.child(key));
    r.read("base_accuracy", p.base_accuracy);
    r.read("coef_u", p.coef_u);
    r.read("coef_k", p.coef_k);
    r.read("coef_interaction", p.coef_interaction);
    r.read("accuracy_noise_sd", p.accuracy_noise_sd);
    r.read("collapse_threshold", p.collapse_threshold);
    r.finish();
}

void read_model(ObjectReader& parent, const std::string& key, LogisticModel& model) {
    const json* v = parent.find(key);
    if (!v) return;
    ObjectReader r(*v, parent.child(key));
    double b0 = model.beta0();
    double b1 = model.beta1();
    r.read("beta0", b0);
    r.read("beta1", b1);
    r.finish();
    with_context(parent.child(key), [&] { model = LogisticModel(b0, b1); });
}

void read_controller(ObjectReader& parent, const std::string& key, ControllerConfig& c) {
    const json* v = parent.find(key);
    if (!v) return;
    ObjectReader r(*v, parent.child(key));
    r.read("gain_kappa", c.gain_kappa);
    r.read("target_ihr", c.target_ihr);
    r.read("max_step", c.max_step);
    r.read("c_min", c.c_min);
    r.read("c_max", c.c_max);
    r.finish();
}

// Drift fields shared by both drift experiments; noise_sd only where it is
// not swept.
void read_drift(ObjectReader& r, DriftConfig& d, bool with_noise) {
    r.read("u0", d.u0);
    r.read("k0", d.k0);
    r.read("delta_u", d.delta_u);
    r.read("delta_k", d.delta_k);
    if (with_noise) {
        r.read("noise_sd", d.noise_sd);
    }
    r.read("horizon_t", d.horizon_t);
    r.read("initial_c", d.initial_c);
    r.read("clip_floor", d.clip_floor);
    r.read("n_runs", d.n_runs);
    read_model(r, "collapse_model", d.collapse_model);
}

json model_json(const LogisticModel& m) { return {{"beta0", m.beta0()}, {"beta1", m.beta1()}}; }

json drift_json(const DriftConfig& d, bool with_noise) {
    json j = {{"u0", d.u0},
              {"k0", d.k0},
              {"delta_u", d.delta_u},
              {"delta_k", d.delta_k},
              {"horizon_t", d.horizon_t},
              {"initial_c", d.initial_c},
              {"clip_floor", d.clip_floor},
              {"n_runs", d.n_runs},
              {"collapse_model", model_json(d.collapse_model)}};
    if (with_noise) {
        j["noise_sd"] = d.noise_sd;
    }
    return j;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

void ExperimentSuiteConfig::validate() const {
    with_context("exp1", [&] { exp1.validate(); });
    with_context("exp2", [&] {
        exp2.drift.validate();
        IHR_REQUIRE(exp2.drift.n_runs >= 1, ErrorCode::ConfigValidation, "n_runs >= 1 violated");
        IHR_REQUIRE(!exp2.sigmas.empty(), ErrorCode::ConfigValidation, "sigmas non-empty violated");
        for (double s : exp2.sigmas) {
            IHR_REQUIRE(s >= 0.0, ErrorCode::ConfigValidation, "sigma >= 0 violated");
        }
        IHR_REQUIRE(exp2.sigmas.size() < std::size_t{0xFFFF} - exp2.drift.experiment_tag,
                    ErrorCode::ConfigValidation, "too many sweep levels");
    });
    with_context("exp3", [&] {
        exp3.drift.validate();
        exp3.controller.validate();
        IHR_REQUIRE(exp3.drift.n_runs >= 1, ErrorCode::ConfigValidation, "n_runs >= 1 violated");
        IHR_REQUIRE(exp3.drift.initial_c >= exp3.controller.c_min &&
                        exp3.drift.initial_c <= exp3.controller.c_max,
                    ErrorCode::ConfigValidation, "c_min <= initial_c <= c_max violated");
    });
    IHR_REQUIRE(!output_dir.empty(), ErrorCode::ConfigValidation, "output_dir must be non-empty");
}

ExperimentSuiteConfig parse_config(std::string_view source) {
    json root;
    try {
        root = json::parse(source.begin(), source.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_and_column(source, e.byte);
        std::ostringstream msg;
        msg << "config parse error at line " << line << ", column " << col << ": " << e.what();
        throw Error(ErrorCode::ConfigParse, msg.str());
    }

    ExperimentSuiteConfig cfg;
    ObjectReader top(root, "");

    std::uint64_t seed = cfg.master_seed;
    top.read("master_seed", seed);

    std::string out_dir = cfg.output_dir.string();
    top.read("output_dir", out_dir);
    cfg.output_dir = out_dir;

    std::string format(to_string(cfg.format));
    top.read("format", format);
    cfg.format = parse_output_format(format);

    if (const json* v = top.find("exp1")) {
        ObjectReader r(*v, "exp1");
        r.read("n_trials", cfg.exp1.n_trials);
        r.read("u_lo", cfg.exp1.u_lo);
        r.read("u_hi", cfg.exp1.u_hi);
        r.read("k_lo", cfg.exp1.k_lo);
        r.read("k_hi", cfg.exp1.k_hi);
        r.read("capacity_c", cfg.exp1.capacity_c);
        r.read("n_bins", cfg.exp1.n_bins);
        read_degradation(r, "degradation", cfg.exp1.degradation);
        r.finish();
    }
    if (const json* v = top.find("exp2")) {
        ObjectReader r(*v, "exp2");
        read_drift(r, cfg.exp2.drift, false);
        if (const json* s = r.find("sigmas")) {
            if (!s->is_array() ||
                !std::all_of(s->begin(), s->end(), [](const json& x) { return x.is_number(); })) {
                throw Error(ErrorCode::ConfigValidation, "\"exp2.sigmas\" must be an array of numbers");
            }
            cfg.exp2.sigmas = s->get<std::vector<double>>();
        }
        r.finish();
    }
    if (const json* v = top.find("exp3")) {
        ObjectReader r(*v, "exp3");
        read_drift(r, cfg.exp3.drift, true);
        read_controller(r, "controller", cfg.exp3.controller);
        r.read("paired", cfg.exp3.paired);
        r.read("dump_single_run", cfg.exp3.dump_single_run);
        r.finish();
    }
    top.finish();

    cfg.set_master_seed(seed);
    cfg.validate();
    return cfg;
}

ExperimentSuiteConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentSuiteConfig& config) {
    const auto& e1 = config.exp1;
    const auto& d = e1.degradation;
    const auto& c = config.exp3.controller;
    json j = {
        {"master_seed", config.master_seed},
        {"output_dir", config.output_dir.string()},
        {"format", std::string(to_string(config.format))},
        {"exp1",
         {{"n_trials", e1.n_trials},
          {"u_lo", e1.u_lo},
          {"u_hi", e1.u_hi},
          {"k_lo", e1.k_lo},
          {"k_hi", e1.k_hi},
          {"capacity_c", e1.capacity_c},
          {"n_bins", e1.n_bins},
          {"degradation",
           {{"base_accuracy", d.base_accuracy},
            {"coef_u", d.coef_u},
            {"coef_k", d.coef_k},
            {"coef_interaction", d.coef_interaction},
            {"accuracy_noise_sd", d.accuracy_noise_sd},
            {"collapse_threshold", d.collapse_threshold}}}}},
    };
    j["exp2"] = drift_json(config.exp2.drift, false);
    j["exp2"]["sigmas"] = config.exp2.sigmas;
    j["exp3"] = drift_json(config.exp3.drift, true);
    j["exp3"]["controller"] = {{"gain_kappa", c.gain_kappa},
                               {"target_ihr", c.target_ihr},
                               {"max_step", c.max_step},
                               {"c_min", c.c_min},
                               {"c_max", c.c_max}};
    j["exp3"]["paired"] = config.exp3.paired;
    j["exp3"]["dump_single_run"] = config.exp3.dump_single_run;
    return j.dump(2) + "\n";
}

} // namespace ihr

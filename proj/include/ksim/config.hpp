#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ksim/grid.hpp"
#include "ksim/init.hpp"
#include "ksim/model.hpp"

namespace ksim {

enum class StepMode { Fixed, Adaptive };

struct StepPolicy {
    StepMode mode = StepMode::Adaptive;
    double dt_fixed = 0.0;  // used in fixed mode only
    double safety = 0.4;
    double dt_min = 1e-12;
    double blowup_threshold = 1e6;
};

struct DiagnosticsConfig {
    double sample_interval = 0.1;
    std::optional<double> snapshot_interval;
    double conv_tol = 1e-6;
    int conv_patience = 5;
    H0Mode h0_mode = H0Mode::Quadratic;
    double h0_vmax = 10.0;
    double fit_start_fraction = 0.5;
};

struct OutputConfig {
    std::string directory = "out";
    std::string run_id = "run";
};

struct RunConfig {
    GridSpec grid;
    ModelParams params;
    InitSpec init;
    StepPolicy stepping;
    double t_end = 10.0;
    DiagnosticsConfig diagnostics;
    OutputConfig output;
};

/// Malformed or invalid configuration. `key` names the offending entry
/// (dotted path) when the problem is semantic; it is empty for syntax errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Parses a JSON run configuration, applies defaults and validates it.
/// Unknown keys are rejected.
RunConfig parse_config(std::string_view text);

/// Same as parse_config, with `key=value` overrides applied to the document
/// tree before validation. Values are read as JSON when they parse as JSON,
/// otherwise as strings.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides);

/// Normalized JSON text of a config: every field explicit, fixed key order,
/// two-space indentation and a trailing newline.
std::string emit_config(const RunConfig& config);

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

std::string to_string(StepMode mode);

}  // namespace ksim

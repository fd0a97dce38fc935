#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ksim/config.hpp"
#include "ksim/io.hpp"
#include "ksim/stepper.hpp"

namespace ksim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitUnbounded = 2;
inline constexpr int kExitStepFailure = 3;

int exit_code(RunStatus status);

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, std::ostream& out,
            std::ostream& err);

struct H0Request {
    std::string kind = "sigmoid";
    double k = 8.0;
    double v_star = 1.0;
    double gamma0 = 1.0;
    std::optional<double> v_max;
    std::string mode = "quadratic";
};

/// Prints the H0 constants and thresholds as a JSON document on `out`.
int cmd_h0(const H0Request& request, std::ostream& out, std::ostream& err);

enum class SeedPolicy { Shared, Incremented };

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;  // JSON text of each value
};

/**
 * JSON document:
 *   { "base": "<config path, relative to the sweep file>",
 *     "axes": [ { "key": "params.mu", "values": [0, 0.01] }, ... ],
 *     "seed_policy": "shared" | "incremented",
 *     "directory": "<optional output directory override>" }
 */
struct SweepSpec {
    std::filesystem::path base_path;
    std::vector<SweepAxis> axes;
    SeedPolicy seed_policy = SeedPolicy::Shared;
    std::optional<std::string> directory;
};

SweepSpec parse_sweep(std::string_view text, const std::filesystem::path& relative_to);

struct SweepRun {
    RunConfig config;
    std::vector<std::string> axis_values;
};

/// Cross product of the axes, first axis slowest. Every expanded config is
/// validated here; the first failure throws ConfigError.
std::vector<SweepRun> expand_sweep(const SweepSpec& spec);

int cmd_sweep(const std::string& sweep_path, int parallelism, std::ostream& out, std::ostream& err);

enum class FigureScale { Desk, Paper };

/// Built-in scenario for figure 1..9; throws ConfigError for other ids.
RunConfig figure_config(int figure_id, FigureScale scale, const std::filesystem::path& root = "figures");

int cmd_figures(int figure_id, const std::string& scale, const std::filesystem::path& root, std::ostream& out,
                std::ostream& err);

}  // namespace ksim::cli

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksim/config.hpp"
#include "ksim/diagnostics.hpp"
#include "ksim/stepper.hpp"

namespace ksim {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
double parse_double(std::string_view text);

/// CSV with header `x[,y[,z]],u,v`, one row per cell in storage order
/// (last axis fastest), coordinates at cell centers.
void write_snapshot(const SimState& state, const std::filesystem::path& path);

struct SnapshotFields {
    Field u;
    Field v;
};

/// Reads a snapshot written for `grid`. Throws IoError on malformed rows,
/// wrong column count, or a row count that does not match the grid.
SnapshotFields read_snapshot(const std::filesystem::path& path, const GridSpec& grid);

inline constexpr const char* kTimeseriesHeader =
    "t,dt,mass_u,mass_v,min_u,max_u,min_v,max_v,linf_dev_u,linf_dev_v,lyapunov,contrast_u";

/// One CSV row per record; absent values are empty cells.
void write_timeseries(std::span<const DiagRecord> records, const std::filesystem::path& path);

struct TheoryBlock {
    H0Mode mode = H0Mode::Quadratic;
    double h0_quadratic = 0.0;
    double h0_linear = 0.0;
    double threshold_16 = 0.0;  // H0 (selected mode) / 16
    double threshold_4 = 0.0;   // H0 (selected mode) / 4
    bool mu_exceeds_16 = false;
    bool mu_exceeds_4 = false;
};

TheoryBlock theory_block(const ModelParams& p, H0Mode mode, double v_max);

struct RunSummary {
    RunOutcome outcome;
    RunConfig config;
    TheoryBlock theory;
    std::optional<double> steady_state;
    std::optional<DecayFit> decay_fit;  // on the Lyapunov series, Converged runs only
    std::vector<std::string> notes;
};

RunSummary summarize(const RunConfig& config, const RunResult& result);

/// JSON document with every RunSummary field; the config is echoed in its
/// normalized form.
std::string summary_json(const RunSummary& summary);
void write_summary(const RunSummary& summary, const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

/// File name used for a snapshot labelled with time t: `t_<t with 6 decimals>.csv`.
std::string snapshot_filename(double t);

/// Directory `<output.directory>/<run_id>`.
std::filesystem::path run_directory(const RunConfig& config);

/// Runs the configuration and writes config.json, summary.json,
/// timeseries.csv and snapshots/ under run_directory(config).
RunSummary execute_run(const RunConfig& config);

}  // namespace ksim

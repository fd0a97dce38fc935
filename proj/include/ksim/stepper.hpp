#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ksim/config.hpp"
#include "ksim/diagnostics.hpp"
#include "ksim/model.hpp"
#include "ksim/state.hpp"

namespace ksim {

enum class RunStatus { Converged, ReachedTEnd, UnboundedGrowth, StepFailure };

std::string to_string(RunStatus status);

struct RunOutcome {
    RunStatus status = RunStatus::ReachedTEnd;
    double t_final = 0.0;
    std::int64_t step_count = 0;
    std::string reason;
    DiagRecord final_record;
};

/// Raised by stable_dt for a state that already holds NaN/Inf.
class StepFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Explicit step size for the current state.
 *
 * Adaptive: safety * min(h^2 / (2 dim gamma_max), h^2 / (2 dim), 0.5 / max(mu, 1), 0.5)
 * where h is the smallest spacing and gamma_max the largest motility over the
 * cells. Fixed: dt_fixed.
 */
double stable_dt(const SimState& state, const ModelParams& p, const StepPolicy& policy);

/// Forward Euler for u_t = lap(gamma(v) u) + r - mu u, v_t = lap(v) - v + u,
/// both equations evaluated at the old state. Holds scratch buffers so a
/// time loop does not allocate.
class ExplicitStepper {
public:
    explicit ExplicitStepper(const GridSpec& grid);

    void advance(SimState& state, const ModelParams& p, double dt);

private:
    GridSpec grid_;
    std::vector<double> flux_;
    std::vector<double> lap_w_;
    std::vector<double> lap_v_;
};

SimState step(const SimState& state, const ModelParams& p, double dt);

/// Snapshot request: `label_time` is the nominal time the snapshot stands for.
using SnapshotSink = std::function<void(const SimState& state, double label_time)>;

struct RunHooks {
    SnapshotSink on_snapshot;
    bool keep_dt_history = false;
};

struct RunResult {
    RunOutcome outcome;
    std::vector<DiagRecord> records;
    std::vector<double> dt_history;  // filled only with keep_dt_history
    std::vector<std::string> notes;
    SimState final_state;
};

SimState initial_state(const RunConfig& config, std::vector<std::string>* notes = nullptr);

/// Steps from the configured initial data until t_end or an earlier verdict.
RunResult run(const RunConfig& config, const RunHooks& hooks = {});
RunResult run(const RunConfig& config, SimState initial, const RunHooks& hooks = {});

}  // namespace ksim

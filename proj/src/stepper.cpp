#include "ksim/stepper.hpp"

#include <algorithm>
#include <cmath>

namespace ksim {

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Converged: return "Converged";
        case RunStatus::ReachedTEnd: return "ReachedTEnd";
        case RunStatus::UnboundedGrowth: return "UnboundedGrowth";
        case RunStatus::StepFailure: return "StepFailure";
    }
    return "Unknown";
}

double stable_dt(const SimState& state, const ModelParams& p, const StepPolicy& policy) {
    if (policy.mode == StepMode::Fixed) return policy.dt_fixed;
    if (!state.finite()) throw StepFailureError("state is not finite");

    const GridSpec& grid = state.grid();
    const double h = grid.min_spacing();
    const double denom = 2.0 * grid.dim();

    // gamma is non-increasing in v for both motility kinds, so its maximum
    // over the cells sits at the smallest v.
    const double gamma_max = gamma(p.motility, state.v.min());

    const double dt_u = h * h / (denom * gamma_max);
    const double dt_v = h * h / denom;
    const double dt_reaction = 0.5 / std::max(p.mu, 1.0);
    return policy.safety * std::min({dt_u, dt_v, dt_reaction, 0.5});
}

ExplicitStepper::ExplicitStepper(const GridSpec& grid)
    : grid_(grid), flux_(grid.total_cells()), lap_w_(grid.total_cells()), lap_v_(grid.total_cells()) {}

void ExplicitStepper::advance(SimState& state, const ModelParams& p, double dt) {
    if (state.u.spec() != grid_ || state.v.spec() != grid_) {
        throw ContractViolation("stepper grid does not match state grid");
    }
    auto u = state.u.values();
    auto v = state.v.values();
    const std::size_t n = u.size();

    for (std::size_t i = 0; i < n; ++i) flux_[i] = gamma(p.motility, v[i]) * u[i];
    laplacian_into(grid_, flux_, lap_w_);
    laplacian_into(grid_, v, lap_v_);

    for (std::size_t i = 0; i < n; ++i) {
        const double u_old = u[i];
        const double v_old = v[i];
        u[i] = u_old + dt * (lap_w_[i] + reaction(u_old, p));
        v[i] = v_old + dt * (lap_v_[i] - v_old + u_old);
    }
    state.t += dt;
    ++state.step_count;
}

SimState step(const SimState& state, const ModelParams& p, double dt) {
    if (!(dt > 0.0)) throw ContractViolation("step: dt must be > 0");
    SimState next = state;
    ExplicitStepper(state.grid()).advance(next, p, dt);
    return next;
}

SimState initial_state(const RunConfig& config, std::vector<std::string>* notes) {
    InitialFields init = make_initial(config.init, config.grid);
    if (init.clamped > 0 && notes) {
        notes->push_back("initial perturbation clamped at 0 in " + std::to_string(init.clamped) + " cells");
    }
    SimState s;
    s.u = std::move(init.u);
    s.v = std::move(init.v);
    return s;
}

RunResult run(const RunConfig& config, const RunHooks& hooks) {
    std::vector<std::string> notes;
    SimState s = initial_state(config, &notes);
    RunResult result = run(config, std::move(s), hooks);
    result.notes.insert(result.notes.begin(), notes.begin(), notes.end());
    return result;
}

namespace {

// Tolerance for deciding that t has reached a scheduled time, so that
// accumulated rounding in t does not skip or delay a sample.
bool reached(double t, double target, double interval) { return t >= target - 1e-9 * interval; }

}  // namespace

RunResult run(const RunConfig& config, SimState initial, const RunHooks& hooks) {
    const ModelParams& p = config.params;
    const DiagnosticsConfig& diag = config.diagnostics;
    const StepPolicy& policy = config.stepping;
    const auto steady = p.steady_state();

    RunResult result;
    SimState& s = result.final_state;
    s = std::move(initial);
    ExplicitStepper stepper(s.grid());

    int below_tol = 0;
    double last_dt = 0.0;
    bool done = false;

    auto sample = [&]() {
        result.records.push_back(make_record(s, p, last_dt));
        const DiagRecord& rec = result.records.back();
        if (steady && std::max(*rec.linf_dev_u, *rec.linf_dev_v) < diag.conv_tol) {
            ++below_tol;
        } else {
            below_tol = 0;
        }
    };
    auto finish = [&](RunStatus status, std::string reason) {
        result.outcome.status = status;
        result.outcome.reason = std::move(reason);
        done = true;
    };
    auto check_growth = [&]() {
        if (!s.finite()) {
            finish(RunStatus::UnboundedGrowth, "state became non-finite");
            return;
        }
        const double umax = s.u.max();
        if (umax > policy.blowup_threshold) {
            finish(RunStatus::UnboundedGrowth, "max(u) exceeded blow-up threshold");
        }
    };

    std::int64_t next_sample = 1;
    std::int64_t next_snapshot = 1;
    const bool snapshots = diag.snapshot_interval.has_value();

    sample();
    if (snapshots && hooks.on_snapshot) hooks.on_snapshot(s, 0.0);
    check_growth();

    while (!done) {
        if (s.t >= config.t_end) {
            finish(RunStatus::ReachedTEnd, "reached t_end");
            break;
        }

        double dt = 0.0;
        try {
            dt = stable_dt(s, p, policy);
        } catch (const StepFailureError& e) {
            finish(RunStatus::StepFailure, e.what());
            break;
        }
        if (policy.mode == StepMode::Adaptive && dt < policy.dt_min) {
            finish(RunStatus::StepFailure, "adaptive dt fell below dt_min");
            break;
        }

        bool last = false;
        if (s.t + dt * (1.0 + 1e-9) >= config.t_end) {
            dt = config.t_end - s.t;
            last = true;
        }
        stepper.advance(s, p, dt);
        if (last) s.t = config.t_end;
        last_dt = dt;
        if (hooks.keep_dt_history) result.dt_history.push_back(dt);

        check_growth();
        if (done) break;

        const double sample_time = static_cast<double>(next_sample) * diag.sample_interval;
        if (reached(s.t, sample_time, diag.sample_interval)) {
            sample();
            while (reached(s.t, static_cast<double>(next_sample) * diag.sample_interval, diag.sample_interval)) {
                ++next_sample;
            }
            if (below_tol >= diag.conv_patience) {
                finish(RunStatus::Converged, "L-infinity deviation below conv_tol for " +
                                                 std::to_string(diag.conv_patience) + " consecutive samples");
            }
        }
        if (snapshots && hooks.on_snapshot) {
            const double interval = *diag.snapshot_interval;
            if (reached(s.t, static_cast<double>(next_snapshot) * interval, interval)) {
                hooks.on_snapshot(s, static_cast<double>(next_snapshot) * interval);
                while (reached(s.t, static_cast<double>(next_snapshot) * interval, interval)) ++next_snapshot;
            }
        }
    }

    if (result.records.back().step != s.step_count) sample();
    if (hooks.on_snapshot) hooks.on_snapshot(s, s.t);

    result.outcome.t_final = s.t;
    result.outcome.step_count = s.step_count;
    result.outcome.final_record = result.records.back();
    return result;
}

}  // namespace ksim

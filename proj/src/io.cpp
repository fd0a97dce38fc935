#include "ksim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ksim {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double x = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw IoError("not a number: '" + std::string(text) + "'");
    }
    return x;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string snapshot_header(int dim) {
    static const char* axes[] = {"x", "y", "z"};
    std::string h;
    for (int a = 0; a < dim; ++a) {
        h += axes[a];
        h += ',';
    }
    return h + "u,v";
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void append_optional(std::string& line, const std::optional<double>& x) {
    line += ',';
    if (x) line += format_double(*x);
}

}  // namespace

void write_snapshot(const SimState& state, const fs::path& path) {
    const GridSpec& grid = state.grid();
    std::string text = snapshot_header(grid.dim());
    text += '\n';
    for (std::size_t i = 0; i < grid.total_cells(); ++i) {
        const auto idx = grid.unravel(i);
        for (int a = 0; a < grid.dim(); ++a) {
            text += format_double(grid.center(a, idx[static_cast<std::size_t>(a)]));
            text += ',';
        }
        text += format_double(state.u[i]);
        text += ',';
        text += format_double(state.v[i]);
        text += '\n';
    }
    write_text(path, text);
}

SnapshotFields read_snapshot(const fs::path& path, const GridSpec& grid) {
    const std::string text = read_text(path);
    std::string_view rest(text);

    auto next_line = [&rest]() -> std::optional<std::string_view> {
        if (rest.empty()) return std::nullopt;
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    };

    const auto header = next_line();
    if (!header || *header != snapshot_header(grid.dim())) {
        throw IoError(path.string() + ": expected header '" + snapshot_header(grid.dim()) + "'");
    }

    const std::size_t total = grid.total_cells();
    const std::size_t columns = static_cast<std::size_t>(grid.dim()) + 2;
    std::vector<double> u;
    std::vector<double> v;
    u.reserve(total);
    v.reserve(total);

    std::size_t row = 0;
    while (auto line = next_line()) {
        if (line->empty()) continue;
        ++row;
        const auto cols = split(*line, ',');
        if (cols.size() != columns) {
            throw IoError(path.string() + ": row " + std::to_string(row) + " has " + std::to_string(cols.size()) +
                          " columns, expected " + std::to_string(columns));
        }
        if (row > total) {
            throw IoError(path.string() + ": more rows than the grid's " + std::to_string(total) + " cells");
        }
        try {
            const auto idx = grid.unravel(row - 1);
            for (int a = 0; a < grid.dim(); ++a) {
                const double x = parse_double(cols[static_cast<std::size_t>(a)]);
                if (std::abs(x - grid.center(a, idx[static_cast<std::size_t>(a)])) > 1e-9 * grid.spacing(a)) {
                    throw IoError("coordinate does not match the grid");
                }
            }
            u.push_back(parse_double(cols[columns - 2]));
            v.push_back(parse_double(cols[columns - 1]));
        } catch (const IoError& e) {
            throw IoError(path.string() + ": row " + std::to_string(row) + ": " + e.what());
        }
    }
    if (row != total) {
        throw IoError(path.string() + ": " + std::to_string(row) + " rows, grid has " + std::to_string(total) +
                      " cells");
    }
    return {Field(grid, std::move(u)), Field(grid, std::move(v))};
}

void write_timeseries(std::span<const DiagRecord> records, const fs::path& path) {
    std::string text = kTimeseriesHeader;
    text += '\n';
    for (const auto& r : records) {
        std::string line = format_double(r.t);
        for (double x : {r.dt, r.mass_u, r.mass_v, r.min_u, r.max_u, r.min_v, r.max_v}) {
            line += ',';
            line += format_double(x);
        }
        append_optional(line, r.linf_dev_u);
        append_optional(line, r.linf_dev_v);
        append_optional(line, r.lyapunov);
        append_optional(line, r.contrast_u);
        text += line;
        text += '\n';
    }
    write_text(path, text);
}

TheoryBlock theory_block(const ModelParams& p, H0Mode mode, double v_max) {
    TheoryBlock tb;
    tb.mode = mode;
    tb.h0_quadratic = h0_quadratic(p.motility, v_max);
    tb.h0_linear = h0_linear(p.motility, v_max);
    const double h0 = mode == H0Mode::Quadratic ? tb.h0_quadratic : tb.h0_linear;
    tb.threshold_16 = h0 / 16.0;
    tb.threshold_4 = h0 / 4.0;
    tb.mu_exceeds_16 = p.mu > tb.threshold_16;
    tb.mu_exceeds_4 = p.mu > tb.threshold_4;
    return tb;
}

RunSummary summarize(const RunConfig& config, const RunResult& result) {
    RunSummary s;
    s.outcome = result.outcome;
    s.config = config;
    s.theory = theory_block(config.params, config.diagnostics.h0_mode, config.diagnostics.h0_vmax);
    s.steady_state = config.params.steady_state();
    s.notes = result.notes;
    if (result.outcome.status == RunStatus::Converged) {
        std::vector<TimeSample> series;
        for (const auto& r : result.records) {
            if (r.lyapunov) series.push_back({r.t, *r.lyapunov});
        }
        try {
            s.decay_fit = fit_decay_rate(series, {config.diagnostics.fit_start_fraction, 1e-14});
        } catch (const DiagnosticError& e) {
            s.notes.push_back(std::string("decay fit unavailable: ") + e.what());
        }
    }
    return s;
}

namespace {

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json record_json(const DiagRecord& r) {
    json j;
    j["t"] = r.t;
    j["dt"] = r.dt;
    j["step"] = r.step;
    j["mass_u"] = r.mass_u;
    j["mass_v"] = r.mass_v;
    j["min_u"] = r.min_u;
    j["max_u"] = r.max_u;
    j["min_v"] = r.min_v;
    j["max_v"] = r.max_v;
    j["linf_dev_u"] = optional_json(r.linf_dev_u);
    j["linf_dev_v"] = optional_json(r.linf_dev_v);
    j["lyapunov"] = optional_json(r.lyapunov);
    j["contrast_u"] = optional_json(r.contrast_u);
    return j;
}

}  // namespace

std::string summary_json(const RunSummary& s) {
    json doc;
    doc["status"] = to_string(s.outcome.status);
    doc["reason"] = s.outcome.reason;
    doc["t_final"] = s.outcome.t_final;
    doc["step_count"] = s.outcome.step_count;
    doc["final"] = record_json(s.outcome.final_record);

    json theory;
    theory["h0_mode"] = to_string(s.theory.mode);
    theory["H0_quadratic"] = s.theory.h0_quadratic;
    theory["H0_linear"] = s.theory.h0_linear;
    theory["threshold_16"] = s.theory.threshold_16;
    theory["threshold_4"] = s.theory.threshold_4;
    theory["mu_exceeds_16"] = s.theory.mu_exceeds_16;
    theory["mu_exceeds_4"] = s.theory.mu_exceeds_4;
    if (s.steady_state) {
        theory["steady_state_u"] = *s.steady_state;
        theory["steady_state_v"] = *s.steady_state;
    }
    doc["theory"] = theory;

    if (s.decay_fit) {
        doc["decay_fit"] = {{"series", "lyapunov"},
                            {"lambda", s.decay_fit->lambda},
                            {"r2", s.decay_fit->r2},
                            {"samples", s.decay_fit->samples}};
    } else {
        doc["decay_fit"] = nullptr;
    }
    doc["notes"] = s.notes;
    doc["config"] = json::parse(emit_config(s.config));
    return doc.dump(2) + "\n";
}

void write_summary(const RunSummary& summary, const fs::path& path) { write_text(path, summary_json(summary)); }

std::string snapshot_filename(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "t_%.6f.csv", t);
    return buf;
}

fs::path run_directory(const RunConfig& config) {
    return fs::path(config.output.directory) / config.output.run_id;
}

RunSummary execute_run(const RunConfig& config) {
    const fs::path dir = run_directory(config);
    std::error_code ec;
    fs::create_directories(dir / "snapshots", ec);
    if (ec) throw IoError("cannot create " + (dir / "snapshots").string() + ": " + ec.message());
    write_text(dir / "config.json", emit_config(config));

    RunHooks hooks;
    hooks.on_snapshot = [&dir](const SimState& state, double label) {
        write_snapshot(state, dir / "snapshots" / snapshot_filename(label));
    };
    const RunResult result = run(config, hooks);
    write_timeseries(result.records, dir / "timeseries.csv");
    RunSummary summary = summarize(config, result);
    write_summary(summary, dir / "summary.json");
    return summary;
}

}  // namespace ksim

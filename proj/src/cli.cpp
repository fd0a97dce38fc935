#include "ksim/cli.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ksim::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int exit_code(RunStatus status) {
    switch (status) {
        case RunStatus::Converged:
        case RunStatus::ReachedTEnd: return kExitOk;
        case RunStatus::UnboundedGrowth: return kExitUnbounded;
        case RunStatus::StepFailure: return kExitStepFailure;
    }
    return kExitStepFailure;
}

namespace {

void report(std::ostream& out, const RunConfig& config, const RunSummary& summary) {
    out << run_directory(config).string() << ": " << to_string(summary.outcome.status) << " at t="
        << format_double(summary.outcome.t_final) << " after " << summary.outcome.step_count << " steps ("
        << summary.outcome.reason << ")\n";
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, std::ostream& out,
            std::ostream& err) {
    RunConfig config;
    try {
        config = load_config(config_path, overrides);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    try {
        const RunSummary summary = execute_run(config);
        for (const auto& note : summary.notes) err << "note: " << note << "\n";
        report(out, config, summary);
        return exit_code(summary.outcome.status);
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_h0(const H0Request& request, std::ostream& out, std::ostream& err) {
    Motility m;
    const auto kind = motility_kind_from_string(request.kind);
    const auto mode = h0_mode_from_string(request.mode);
    if (!kind) {
        err << "error: --kind must be sigmoid or constant\n";
        return kExitConfigError;
    }
    if (!mode) {
        err << "error: --mode must be quadratic or linear\n";
        return kExitConfigError;
    }
    m = *kind == MotilityKind::Sigmoid ? Motility::sigmoid(request.k, request.v_star) : Motility::constant(request.gamma0);
    try {
        m.validate();
        const double v_max = request.v_max.value_or(default_h0_vmax(m));
        if (!(v_max > 0.0)) throw ContractViolation("--vmax must be > 0");

        ModelParams p;
        p.motility = m;
        const TheoryBlock tb = theory_block(p, *mode, v_max);

        json doc;
        json motility;
        motility["kind"] = to_string(m.kind);
        if (m.kind == MotilityKind::Sigmoid) {
            motility["k"] = m.k;
            motility["v_star"] = m.v_star;
        } else {
            motility["gamma0"] = m.gamma0;
        }
        doc["motility"] = motility;
        doc["v_max"] = v_max;
        doc["H0_quadratic"] = tb.h0_quadratic;
        doc["H0_linear"] = tb.h0_linear;
        doc["h0_mode"] = to_string(tb.mode);
        doc["threshold_16"] = tb.threshold_16;
        doc["threshold_4"] = tb.threshold_4;
        out << doc.dump(2) << "\n";
        return kExitOk;
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

SweepSpec parse_sweep(std::string_view text, const fs::path& relative_to) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("<root>", "expected an object");

    SweepSpec spec;
    for (const auto& [key, value] : doc.items()) {
        if (key == "base") {
            if (!value.is_string()) throw ConfigError("base", "must be a string");
            spec.base_path = relative_to / value.get<std::string>();
        } else if (key == "axes") {
            if (!value.is_array()) throw ConfigError("axes", "must be an array");
            for (const auto& axis : value) {
                if (!axis.is_object() || !axis.contains("key") || !axis.contains("values") || axis.size() != 2 ||
                    !axis["key"].is_string() || !axis["values"].is_array() || axis["values"].empty()) {
                    throw ConfigError("axes", "each axis needs a string \"key\" and a non-empty \"values\" array");
                }
                SweepAxis a;
                a.key = axis["key"].get<std::string>();
                for (const auto& v : axis["values"]) a.values.push_back(v.dump());
                spec.axes.push_back(std::move(a));
            }
        } else if (key == "seed_policy") {
            const std::string p = value.is_string() ? value.get<std::string>() : "";
            if (p == "shared") {
                spec.seed_policy = SeedPolicy::Shared;
            } else if (p == "incremented") {
                spec.seed_policy = SeedPolicy::Incremented;
            } else {
                throw ConfigError("seed_policy", "must be \"shared\" or \"incremented\"");
            }
        } else if (key == "directory") {
            if (!value.is_string() || value.get<std::string>().empty()) {
                throw ConfigError("directory", "must be a non-empty string");
            }
            spec.directory = value.get<std::string>();
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (spec.base_path.empty()) throw ConfigError("base", "required key is missing");
    return spec;
}

std::vector<SweepRun> expand_sweep(const SweepSpec& spec) {
    const std::string base_text = read_file(spec.base_path);
    const RunConfig base = parse_config(base_text);

    std::size_t total = 1;
    for (const auto& axis : spec.axes) total *= axis.values.size();

    std::vector<SweepRun> runs;
    runs.reserve(total);
    for (std::size_t index = 0; index < total; ++index) {
        std::vector<std::string> overrides;
        std::vector<std::string> values;
        std::size_t rem = index;
        // First axis slowest: peel digits from the last axis.
        values.resize(spec.axes.size());
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const auto& axis = spec.axes[a];
            values[a] = axis.values[rem % axis.values.size()];
            rem /= axis.values.size();
        }
        for (std::size_t a = 0; a < spec.axes.size(); ++a) overrides.push_back(spec.axes[a].key + "=" + values[a]);

        char id[32];
        std::snprintf(id, sizeof(id), "_%04zu", index);
        overrides.push_back("output.run_id=" + json(base.output.run_id + id).dump());
        if (spec.directory) overrides.push_back("output.directory=" + json(*spec.directory).dump());
        if (spec.seed_policy == SeedPolicy::Incremented) {
            overrides.push_back("init.seed=" + std::to_string(base.init.seed + index));
        }
        runs.push_back({parse_config(base_text, overrides), std::move(values)});
    }
    return runs;
}

int cmd_sweep(const std::string& sweep_path, int parallelism, std::ostream& out, std::ostream& err) {
    std::vector<SweepRun> runs;
    SweepSpec spec;
    try {
        spec = parse_sweep(read_file(sweep_path), fs::path(sweep_path).parent_path());
        runs = expand_sweep(spec);
    } catch (const ConfigError& e) {
        err << "sweep config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    if (parallelism < 1) {
        err << "error: --parallel must be >= 1\n";
        return kExitConfigError;
    }

    std::vector<std::optional<RunSummary>> summaries(runs.size());
    std::vector<std::string> failures(runs.size());
    std::atomic<std::size_t> next{0};
    std::mutex out_mutex;

    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < runs.size(); i = next.fetch_add(1)) {
            try {
                summaries[i] = execute_run(runs[i].config);
                std::lock_guard lock(out_mutex);
                report(out, runs[i].config, *summaries[i]);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism), runs.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const fs::path directory = runs.empty() ? fs::path(".") : fs::path(runs.front().config.output.directory);
    std::string csv = "run_id";
    for (const auto& axis : spec.axes) csv += "," + axis.key;
    csv += ",status,t_final,linf_dev_u,lambda\n";

    int code = kExitOk;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        csv += runs[i].config.output.run_id;
        for (const auto& v : runs[i].axis_values) csv += "," + v;
        if (!summaries[i]) {
            err << "run " << runs[i].config.output.run_id << " failed: " << failures[i] << "\n";
            csv += ",Error,,,\n";
            code = kExitConfigError;
            continue;
        }
        const RunSummary& s = *summaries[i];
        csv += "," + to_string(s.outcome.status) + "," + format_double(s.outcome.t_final) + ",";
        if (s.outcome.final_record.linf_dev_u) csv += format_double(*s.outcome.final_record.linf_dev_u);
        csv += ",";
        if (s.decay_fit) csv += format_double(s.decay_fit->lambda);
        csv += "\n";
        if (s.outcome.status == RunStatus::StepFailure && code == kExitOk) code = kExitStepFailure;
    }
    try {
        write_text(directory / "sweep.csv", csv);
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return code;
}

namespace {

struct FigureScenario {
    int dim;
    double mu;
    double base;  // initial level of both u and v
};

FigureScenario scenario(int id) {
    switch (id) {
        case 1: return {1, 0.0, 1000.0};
        case 2: return {1, 0.01, 100.0};
        case 3: return {1, 0.01, 1e4};
        case 4: return {2, 0.0, 1000.0};
        case 5: return {2, 0.001, 1000.0};
        case 6: return {2, 0.001, 1e4};
        case 7: return {3, 0.0, 1000.0};
        case 8: return {3, 0.001, 1000.0};
        case 9: return {3, 0.01, 1e4};
        default: throw ConfigError("figure_id", "must be an integer in 1..9, got " + std::to_string(id));
    }
}

}  // namespace

RunConfig figure_config(int figure_id, FigureScale scale, const fs::path& root) {
    const FigureScenario sc = scenario(figure_id);
    const bool desk = scale == FigureScale::Desk;

    static constexpr int kDeskCells[] = {256, 64, 32};
    static constexpr int kPaperCells[] = {1024, 128, 64};
    const int n = (desk ? kDeskCells : kPaperCells)[sc.dim - 1];

    RunConfig cfg;
    std::vector<double> lengths(static_cast<std::size_t>(sc.dim), 2.0);
    std::vector<int> cells(static_cast<std::size_t>(sc.dim), n);
    cfg.grid = GridSpec(sc.dim, lengths, cells);
    cfg.params.r = 1.0;
    cfg.params.mu = sc.mu;
    cfg.params.motility = Motility::sigmoid();
    cfg.init = InitSpec{sc.base, sc.base, 0.01 * sc.base, 1};

    if (sc.mu == 0.0) {
        // Growth is linear in t (about r per unit time at every cell), so the
        // desk threshold trips after ~100 time units.
        cfg.stepping.blowup_threshold = desk ? 1.1 * sc.base : 1e5;
        cfg.t_end = desk ? 1000.0 : 1e5;
    } else {
        cfg.stepping.blowup_threshold = 1e6 * sc.base;
        cfg.t_end = desk ? (sc.dim == 1 ? 1500.0 : 200.0) : 1e5;
    }
    cfg.diagnostics.sample_interval = cfg.t_end / 1000.0;
    cfg.diagnostics.snapshot_interval = cfg.t_end / 10.0;
    cfg.diagnostics.h0_vmax = default_h0_vmax(cfg.params.motility);
    cfg.output.directory = root.string();
    cfg.output.run_id = "fig" + std::to_string(figure_id);

    // Round-trip through the parser so built-in scenarios obey the same validation.
    return parse_config(emit_config(cfg));
}

int cmd_figures(int figure_id, const std::string& scale, const fs::path& root, std::ostream& out, std::ostream& err) {
    FigureScale s;
    if (scale == "desk") {
        s = FigureScale::Desk;
    } else if (scale == "paper") {
        s = FigureScale::Paper;
    } else {
        err << "error: --scale must be desk or paper\n";
        return kExitConfigError;
    }
    RunConfig config;
    try {
        config = figure_config(figure_id, s, root);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    try {
        const RunSummary summary = execute_run(config);
        report(out, config, summary);
        return exit_code(summary.outcome.status);
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

}  // namespace ksim::cli

#include "ksim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ksim {

using json = nlohmann::ordered_json;

std::string to_string(StepMode mode) { return mode == StepMode::Fixed ? "fixed" : "adaptive"; }

namespace {

// View of one JSON object that records which keys were read, so that
// leftovers can be reported as unknown.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it != node_.end() && !it->is_null();
    }

    const json& at(const std::string& key) {
        seen_.insert(key);
        return node_.at(key);
    }

    Section child(const std::string& key) {
        static const json empty = json::object();
        if (!has(key)) return Section(empty, key_path(key));
        return Section(at(key), key_path(key));
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(key_path(key), "required key is missing");
        }
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(key_path(key), "must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(key_path(key), "must be finite");
        return x;
    }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(key_path(key), "required key is missing");
        }
        const json& v = at(key);
        if (!v.is_number_integer()) throw ConfigError(key_path(key), "must be an integer");
        return v.get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            throw ConfigError(key_path(key), "must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(key_path(key), "must be a string");
        return v.get<std::string>();
    }

    void reject_unknown() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.contains(key)) throw ConfigError(key_path(key), "unknown key");
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& constraint) {
    if (!ok) throw ConfigError(key, constraint);
}

GridSpec read_grid(Section& root) {
    Section g = root.child("grid");
    const auto dim = g.integer("dim");
    require(dim >= 1 && dim <= 3, "grid.dim", "must be 1, 2 or 3");

    auto read_list = [&](const std::string& key) -> const json& {
        if (!g.has(key)) throw ConfigError("grid." + key, "required key is missing");
        const json& list = g.at(key);
        require(list.is_array() && list.size() == static_cast<std::size_t>(dim), "grid." + key,
                "must be an array with dim entries");
        return list;
    };

    std::vector<double> lengths;
    for (const auto& x : read_list("lengths")) {
        require(x.is_number(), "grid.lengths", "entries must be numbers");
        const double l = x.get<double>();
        require(l > 0.0 && std::isfinite(l), "grid.lengths", "lengths must be > 0");
        lengths.push_back(l);
    }
    std::vector<int> cells;
    for (const auto& x : read_list("cells")) {
        require(x.is_number_integer(), "grid.cells", "entries must be integers");
        const auto n = x.get<std::int64_t>();
        require(n >= 3, "grid.cells", "cells must be >= 3");
        require(n <= 1 << 20, "grid.cells", "cells must be <= 1048576");
        cells.push_back(static_cast<int>(n));
    }
    g.reject_unknown();
    return GridSpec(static_cast<int>(dim), lengths, cells);
}

ModelParams read_params(Section& root) {
    Section p = root.child("params");
    ModelParams params;
    params.r = p.number("r");
    require(params.r >= 0.0, "params.r", "must be >= 0");
    params.mu = p.number("mu");
    require(params.mu >= 0.0, "params.mu", "must be >= 0");

    Section m = p.child("motility");
    const std::string kind = m.string("kind", "sigmoid");
    const auto parsed = motility_kind_from_string(kind);
    require(parsed.has_value(), "params.motility.kind", "must be \"sigmoid\" or \"constant\"");
    if (*parsed == MotilityKind::Sigmoid) {
        params.motility = Motility::sigmoid(m.number("k", 8.0), m.number("v_star", 1.0));
        require(params.motility.k > 0.0, "params.motility.k", "must be > 0");
    } else {
        params.motility = Motility::constant(m.number("gamma0", 1.0));
        require(params.motility.gamma0 > 0.0, "params.motility.gamma0", "must be > 0");
    }
    m.reject_unknown();
    p.reject_unknown();
    return params;
}

InitSpec read_init(Section& root, const ModelParams& params) {
    Section s = root.child("init");
    InitSpec init;
    init.base_u = s.number("base_u", params.steady_state().value_or(1.0));
    require(init.base_u >= 0.0, "init.base_u", "must be >= 0");
    init.base_v = s.number("base_v", init.base_u);
    require(init.base_v >= 0.0, "init.base_v", "must be >= 0");
    init.amplitude = s.number("amplitude", 0.01 * init.base_u);
    require(init.amplitude >= 0.0, "init.amplitude", "must be >= 0");
    init.seed = s.unsigned_integer("seed", 1);
    s.reject_unknown();
    return init;
}

void read_stepping(Section& root, RunConfig& cfg) {
    Section s = root.child("stepping");
    const std::string mode = s.string("mode", "adaptive");
    require(mode == "adaptive" || mode == "fixed", "stepping.mode", "must be \"adaptive\" or \"fixed\"");
    StepPolicy& policy = cfg.stepping;
    policy.mode = mode == "fixed" ? StepMode::Fixed : StepMode::Adaptive;
    if (policy.mode == StepMode::Fixed) {
        policy.dt_fixed = s.number("dt_fixed");
        require(policy.dt_fixed > 0.0, "stepping.dt_fixed", "must be > 0");
    } else {
        require(!s.has("dt_fixed"), "stepping.dt_fixed", "only allowed in fixed mode");
    }
    policy.safety = s.number("safety", 0.4);
    require(policy.safety > 0.0 && policy.safety <= 1.0, "stepping.safety", "must be in (0, 1]");
    policy.dt_min = s.number("dt_min", 1e-12);
    require(policy.dt_min > 0.0, "stepping.dt_min", "must be > 0");
    policy.blowup_threshold = s.number("blowup_threshold", 1e6 * std::max(1.0, cfg.init.base_u));
    require(policy.blowup_threshold > 0.0, "stepping.blowup_threshold", "must be > 0");
    cfg.t_end = s.number("t_end", 10.0);
    require(cfg.t_end >= 0.0, "stepping.t_end", "must be >= 0");
    s.reject_unknown();
}

void read_diagnostics(Section& root, RunConfig& cfg) {
    Section s = root.child("diagnostics");
    DiagnosticsConfig& d = cfg.diagnostics;
    d.sample_interval = s.number("sample_interval", 0.1);
    require(d.sample_interval > 0.0, "diagnostics.sample_interval", "must be > 0");
    d.snapshot_interval = s.optional_number("snapshot_interval");
    require(!d.snapshot_interval || *d.snapshot_interval > 0.0, "diagnostics.snapshot_interval",
            "must be > 0 or null");
    d.conv_tol = s.number("conv_tol", 1e-6);
    require(d.conv_tol > 0.0, "diagnostics.conv_tol", "must be > 0");
    const auto patience = s.integer("conv_patience", 5);
    require(patience >= 1 && patience <= 1000000, "diagnostics.conv_patience", "must be >= 1");
    d.conv_patience = static_cast<int>(patience);
    const auto mode = h0_mode_from_string(s.string("h0_mode", "quadratic"));
    require(mode.has_value(), "diagnostics.h0_mode", "must be \"quadratic\" or \"linear\"");
    d.h0_mode = *mode;
    d.h0_vmax = s.number("h0_vmax", default_h0_vmax(cfg.params.motility));
    require(d.h0_vmax > 0.0, "diagnostics.h0_vmax", "must be > 0");
    d.fit_start_fraction = s.number("fit_start_fraction", 0.5);
    require(d.fit_start_fraction >= 0.0 && d.fit_start_fraction < 1.0, "diagnostics.fit_start_fraction",
            "must be in [0, 1)");
    s.reject_unknown();
}

void read_output(Section& root, RunConfig& cfg) {
    Section s = root.child("output");
    cfg.output.directory = s.string("directory", "out");
    require(!cfg.output.directory.empty(), "output.directory", "must not be empty");
    cfg.output.run_id = s.string("run_id", "run");
    require(!cfg.output.run_id.empty() && cfg.output.run_id.find('/') == std::string::npos &&
                cfg.output.run_id != "." && cfg.output.run_id != "..",
            "output.run_id", "must be a non-empty plain name");
    s.reject_unknown();
}

RunConfig from_json(const json& doc) {
    Section root(doc, "");
    RunConfig cfg;
    cfg.grid = read_grid(root);
    cfg.params = read_params(root);
    cfg.init = read_init(root, cfg.params);
    read_stepping(root, cfg);
    read_diagnostics(root, cfg);
    read_output(root, cfg);
    root.reject_unknown();
    return cfg;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("syntax error: ") + e.what());
    }
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError(assignment, "override must have the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError(key, "empty path component in override");
        if (!node->is_object()) throw ConfigError(key, "override path crosses a non-object value");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

}  // namespace

RunConfig parse_config(std::string_view text) { return parse_config(text, {}); }

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
    json doc = parse_json(text);
    for (const auto& o : overrides) apply_override(doc, o);
    try {
        return from_json(doc);
    } catch (const json::exception& e) {
        throw ConfigError("", e.what());
    } catch (const ContractViolation& e) {
        throw ConfigError("", e.what());
    }
}

std::string emit_config(const RunConfig& cfg) {
    json doc;
    json lengths = json::array();
    json cells = json::array();
    for (int a = 0; a < cfg.grid.dim(); ++a) {
        lengths.push_back(cfg.grid.length(a));
        cells.push_back(cfg.grid.cells(a));
    }
    doc["grid"] = {{"dim", cfg.grid.dim()}, {"lengths", lengths}, {"cells", cells}};

    json motility;
    motility["kind"] = to_string(cfg.params.motility.kind);
    if (cfg.params.motility.kind == MotilityKind::Sigmoid) {
        motility["k"] = cfg.params.motility.k;
        motility["v_star"] = cfg.params.motility.v_star;
    } else {
        motility["gamma0"] = cfg.params.motility.gamma0;
    }
    doc["params"] = {{"r", cfg.params.r}, {"mu", cfg.params.mu}, {"motility", motility}};

    doc["init"] = {{"base_u", cfg.init.base_u},
                   {"base_v", cfg.init.base_v},
                   {"amplitude", cfg.init.amplitude},
                   {"seed", cfg.init.seed}};

    json stepping;
    stepping["mode"] = to_string(cfg.stepping.mode);
    if (cfg.stepping.mode == StepMode::Fixed) stepping["dt_fixed"] = cfg.stepping.dt_fixed;
    stepping["safety"] = cfg.stepping.safety;
    stepping["dt_min"] = cfg.stepping.dt_min;
    stepping["blowup_threshold"] = cfg.stepping.blowup_threshold;
    stepping["t_end"] = cfg.t_end;
    doc["stepping"] = stepping;

    const DiagnosticsConfig& d = cfg.diagnostics;
    json diag;
    diag["sample_interval"] = d.sample_interval;
    diag["snapshot_interval"] = d.snapshot_interval ? json(*d.snapshot_interval) : json(nullptr);
    diag["conv_tol"] = d.conv_tol;
    diag["conv_patience"] = d.conv_patience;
    diag["h0_mode"] = to_string(d.h0_mode);
    diag["h0_vmax"] = d.h0_vmax;
    diag["fit_start_fraction"] = d.fit_start_fraction;
    doc["diagnostics"] = diag;

    doc["output"] = {{"directory", cfg.output.directory}, {"run_id", cfg.output.run_id}};
    return doc.dump(2) + "\n";
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

}  // namespace ksim

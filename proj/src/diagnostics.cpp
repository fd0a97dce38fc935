#include "ksim/diagnostics.hpp"

#include <cmath>
#include <string>

namespace ksim {

DiagRecord make_record(const SimState& state, const ModelParams& p, double last_dt) {
    DiagRecord rec;
    rec.t = state.t;
    rec.dt = last_dt;
    rec.step = state.step_count;
    rec.mass_u = integrate(state.u);
    rec.mass_v = integrate(state.v);
    rec.min_u = state.u.min();
    rec.max_u = state.u.max();
    rec.min_v = state.v.min();
    rec.max_v = state.v.max();
    if (const auto ss = p.steady_state()) {
        rec.linf_dev_u = linf_deviation(state.u, *ss);
        rec.linf_dev_v = linf_deviation(state.v, *ss);
        rec.lyapunov = lyapunov(state, p);
    }
    if (mean(state.u) > 0.0) rec.contrast_u = spatial_contrast(state.u);
    return rec;
}

double lyapunov(const SimState& state, const ModelParams& p) {
    const auto ss = p.steady_state();
    if (!ss) throw DiagnosticError("Lyapunov functional is undefined for mu = 0");
    return l2_sq_deviation(state.u, *ss) + l2_sq_deviation(state.v, *ss);
}

double mass_oracle(double t, double m0, const ModelParams& p, double omega_vol) {
    const double source = p.r * omega_vol;
    if (p.mu > 0.0) {
        const double eq = source / p.mu;
        return eq + (m0 - eq) * std::exp(-p.mu * t);
    }
    return m0 + source * t;
}

double discrete_mass_oracle(std::int64_t n, double m0, double dt, const ModelParams& p, double omega_vol) {
    const double source = p.r * omega_vol;
    double m = m0;
    for (std::int64_t k = 0; k < n; ++k) m += dt * (source - p.mu * m);
    return m;
}

double discrete_mass_oracle(std::span<const double> dts, double m0, const ModelParams& p, double omega_vol) {
    const double source = p.r * omega_vol;
    double m = m0;
    for (double dt : dts) m += dt * (source - p.mu * m);
    return m;
}

DecayFit fit_decay_rate(std::span<const TimeSample> series, const DecayFitOptions& opts) {
    std::vector<TimeSample> admissible;
    admissible.reserve(series.size());
    for (const auto& s : series) {
        if (s.value > opts.floor && std::isfinite(s.value)) admissible.push_back(s);
    }
    constexpr std::size_t kMinSamples = 5;
    if (admissible.size() < kMinSamples) {
        throw DiagnosticError("decay fit needs at least 5 samples above the floor, got " +
                              std::to_string(admissible.size()));
    }

    auto start = static_cast<std::size_t>(opts.start_fraction * static_cast<double>(admissible.size()));
    start = std::min(start, admissible.size() - kMinSamples);
    const std::size_t count = admissible.size() - start;

    double t_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = start; i < admissible.size(); ++i) {
        t_mean += admissible[i].t;
        y_mean += std::log(admissible[i].value);
    }
    t_mean /= static_cast<double>(count);
    y_mean /= static_cast<double>(count);

    double stt = 0.0;
    double sty = 0.0;
    double syy = 0.0;
    for (std::size_t i = start; i < admissible.size(); ++i) {
        const double dt = admissible[i].t - t_mean;
        const double dy = std::log(admissible[i].value) - y_mean;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (!(stt > 0.0)) throw DiagnosticError("decay fit needs distinct sample times");

    const double slope = sty / stt;
    const double intercept = y_mean - slope * t_mean;
    double ss_res = 0.0;
    for (std::size_t i = start; i < admissible.size(); ++i) {
        const double e = std::log(admissible[i].value) - (intercept + slope * admissible[i].t);
        ss_res += e * e;
    }

    DecayFit fit;
    fit.lambda = -slope;
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.samples = count;
    return fit;
}

double spatial_contrast(const Field& f) {
    const double m = mean(f);
    if (!(m > 0.0)) throw DiagnosticError("spatial contrast is undefined for non-positive mean");
    return f.max() / m;
}

}  // namespace ksim

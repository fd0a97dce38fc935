#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ksim/model.hpp"
#include "ksim/state.hpp"

namespace ksim {

/// A functional was requested outside its domain (mu == 0, mean <= 0,
/// too few samples to fit).
class DiagnosticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct DiagRecord {
    double t = 0.0;
    double dt = 0.0;  // size of the step that produced this sample; 0 at t = 0
    std::int64_t step = 0;
    double mass_u = 0.0;
    double mass_v = 0.0;
    double min_u = 0.0;
    double max_u = 0.0;
    double min_v = 0.0;
    double max_v = 0.0;
    std::optional<double> linf_dev_u;  // absent when mu == 0
    std::optional<double> linf_dev_v;
    std::optional<double> lyapunov;
    std::optional<double> contrast_u;  // absent when mean(u) <= 0

    bool operator==(const DiagRecord&) const = default;
};

DiagRecord make_record(const SimState& state, const ModelParams& p, double last_dt);

/// int (u - r/mu)^2 + int (v - r/mu)^2. Requires mu > 0.
double lyapunov(const SimState& state, const ModelParams& p);

/// Closed-form solution of M' = r |Omega| - mu M with M(0) = m0.
double mass_oracle(double t, double m0, const ModelParams& p, double omega_vol);

/// n iterations of M <- M + dt (r |Omega| - mu M) starting from m0.
double discrete_mass_oracle(std::int64_t n, double m0, double dt, const ModelParams& p, double omega_vol);

/// Same recurrence replayed over a variable step sequence.
double discrete_mass_oracle(std::span<const double> dts, double m0, const ModelParams& p, double omega_vol);

struct TimeSample {
    double t;
    double value;
};

struct DecayFit {
    double lambda = 0.0;
    double r2 = 0.0;
    std::size_t samples = 0;
};

struct DecayFitOptions {
    double start_fraction = 0.5;  // fit the samples after this fraction of the admissible ones
    double floor = 1e-14;         // samples at or below are not admissible
};

/// Least-squares fit of ln(value) against t over the tail window; lambda = -slope.
/// Throws DiagnosticError with fewer than five admissible samples.
DecayFit fit_decay_rate(std::span<const TimeSample> series, const DecayFitOptions& opts = {});

/// max(f) / mean(f). Throws DiagnosticError when mean(f) <= 0.
double spatial_contrast(const Field& f);

}  // namespace ksim

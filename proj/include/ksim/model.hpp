#pragma once

#include <optional>
#include <string>

namespace ksim {

enum class MotilityKind { Sigmoid, Constant };

/// Signal-dependent motility gamma(v).
///
/// Sigmoid: gamma(v) = 1 / (1 + exp(k (v - v_star))), decreasing from ~1 to 0.
/// Constant: gamma(v) = gamma0.
struct Motility {
    MotilityKind kind = MotilityKind::Sigmoid;
    double k = 8.0;
    double v_star = 1.0;
    double gamma0 = 1.0;

    static Motility sigmoid(double k = 8.0, double v_star = 1.0) {
        return {MotilityKind::Sigmoid, k, v_star, 1.0};
    }
    static Motility constant(double gamma0) { return {MotilityKind::Constant, 8.0, 1.0, gamma0}; }

    /// Throws ContractViolation for k <= 0 or gamma0 <= 0 (or non-finite values).
    void validate() const;
};

std::string to_string(MotilityKind kind);
std::optional<MotilityKind> motility_kind_from_string(const std::string& s);

/// Lower bound on gamma. The logistic tail underflows double precision for
/// k (v - v_star) > ~708 and gamma must stay positive; the floor also keeps
/// gamma * u and its differences clear of subnormals, which are very slow.
/// At this size the motility term is far below one ulp of any u it acts on.
inline constexpr double kGammaFloor = 1e-200;

/// Never returns less than kGammaFloor.
double gamma(const Motility& m, double v);
double gamma_prime(const Motility& m, double v);

enum class H0Mode { Quadratic, Linear };

std::string to_string(H0Mode mode);
std::optional<H0Mode> h0_mode_from_string(const std::string& s);

/// sup over [0, v_max] of |gamma'|^2 / gamma.
double h0_quadratic(const Motility& m, double v_max);
/// sup over [0, v_max] of |gamma'| / gamma.
double h0_linear(const Motility& m, double v_max);
double h0(const Motility& m, H0Mode mode, double v_max);

/// Search horizon used when none is configured: 10 max(v_star, 1).
double default_h0_vmax(const Motility& m);

struct ModelParams {
    double r = 1.0;
    double mu = 0.0;
    Motility motility{};

    /// r / mu, or nothing when mu == 0.
    std::optional<double> steady_state() const;
};

inline double reaction(double u, const ModelParams& p) { return p.r - p.mu * u; }

struct ConvergenceCheck {
    double h0 = 0.0;
    double threshold = 0.0;  // h0 / 16
    bool guaranteed = false;  // mu > threshold
};

ConvergenceCheck convergence_guaranteed(const ModelParams& p, H0Mode mode, double v_max);

}  // namespace ksim

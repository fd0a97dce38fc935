#include "ksim/model.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>

#include "ksim/grid.hpp"

namespace ksim {

void Motility::validate() const {
    switch (kind) {
        case MotilityKind::Sigmoid:
            if (!(k > 0.0) || !std::isfinite(k)) throw ContractViolation("motility.k must be > 0");
            if (!std::isfinite(v_star)) throw ContractViolation("motility.v_star must be finite");
            break;
        case MotilityKind::Constant:
            if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
                throw ContractViolation("motility.gamma0 must be > 0");
            }
            break;
    }
}

std::string to_string(MotilityKind kind) {
    return kind == MotilityKind::Sigmoid ? "sigmoid" : "constant";
}

std::optional<MotilityKind> motility_kind_from_string(const std::string& s) {
    if (s == "sigmoid") return MotilityKind::Sigmoid;
    if (s == "constant") return MotilityKind::Constant;
    return std::nullopt;
}

std::string to_string(H0Mode mode) { return mode == H0Mode::Quadratic ? "quadratic" : "linear"; }

std::optional<H0Mode> h0_mode_from_string(const std::string& s) {
    if (s == "quadratic") return H0Mode::Quadratic;
    if (s == "linear") return H0Mode::Linear;
    return std::nullopt;
}

double gamma(const Motility& m, double v) {
    if (m.kind == MotilityKind::Constant) return m.gamma0;
    const double x = m.k * (v - m.v_star);
    // exp(-461) < kGammaFloor: the result would be floored anyway.
    if (x > 461.0) return kGammaFloor;
    double g;
    if (x > 0.0) {
        const double e = std::exp(-x);
        g = e / (1.0 + e);
    } else {
        g = 1.0 / (1.0 + std::exp(x));
    }
    return std::max(g, kGammaFloor);
}

double gamma_prime(const Motility& m, double v) {
    if (m.kind == MotilityKind::Constant) return 0.0;
    const double g = gamma(m, v);
    return -m.k * g * (1.0 - g);
}

namespace {

constexpr int kSupSamples = 100000;

// Dense uniform sampling on [0, v_max], then golden-section refinement inside
// the bracket around the best sample.
double sup_on_interval(const std::function<double(double)>& q, double v_max) {
    if (!(v_max > 0.0) || !std::isfinite(v_max)) {
        throw ContractViolation("H0 search horizon v_max must be > 0");
    }
    const double step = v_max / kSupSamples;
    int best = 0;
    double best_val = q(0.0);
    for (int i = 1; i <= kSupSamples; ++i) {
        const double val = q(i * step);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }

    double a = std::max(0, best - 1) * step;
    double b = std::min(kSupSamples, best + 1) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double qc = q(c);
    double qd = q(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, v_max); ++it) {
        if (qc > qd) {
            b = d;
            d = c;
            qd = qc;
            c = b - inv_phi * (b - a);
            qc = q(c);
        } else {
            a = c;
            c = d;
            qc = qd;
            d = a + inv_phi * (b - a);
            qd = q(d);
        }
    }
    return std::max({best_val, qc, qd, q(0.5 * (a + b))});
}

}  // namespace

double h0_quadratic(const Motility& m, double v_max) {
    return sup_on_interval(
        [&m](double v) {
            const double gp = gamma_prime(m, v);
            return gp * gp / gamma(m, v);
        },
        v_max);
}

double h0_linear(const Motility& m, double v_max) {
    return sup_on_interval([&m](double v) { return std::abs(gamma_prime(m, v)) / gamma(m, v); }, v_max);
}

double h0(const Motility& m, H0Mode mode, double v_max) {
    return mode == H0Mode::Quadratic ? h0_quadratic(m, v_max) : h0_linear(m, v_max);
}

double default_h0_vmax(const Motility& m) { return 10.0 * std::max(m.v_star, 1.0); }

std::optional<double> ModelParams::steady_state() const {
    if (mu > 0.0) return r / mu;
    return std::nullopt;
}

ConvergenceCheck convergence_guaranteed(const ModelParams& p, H0Mode mode, double v_max) {
    ConvergenceCheck out;
    out.h0 = h0(p.motility, mode, v_max);
    out.threshold = out.h0 / 16.0;
    out.guaranteed = p.mu > out.threshold;
    return out;
}

}  // namespace ksim

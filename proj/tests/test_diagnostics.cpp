#include <cmath>
#include <random>

#include "doctest.h"
#include "ksim/diagnostics.hpp"
#include "ksim/init.hpp"

using namespace ksim;

namespace {

SimState constant_state(const GridSpec& g, double u, double v) {
    SimState s;
    s.u = Field(g, u);
    s.v = Field(g, v);
    return s;
}

}  // namespace

TEST_CASE("lyapunov") {
    const GridSpec g = GridSpec::line(2.0, 32);
    const ModelParams p{1.0, 0.5, Motility::sigmoid()};
    CHECK(lyapunov(constant_state(g, 2.0, 2.0), p) == 0.0);
    CHECK(lyapunov(constant_state(g, 3.0, 2.0), p) == doctest::Approx(2.0).epsilon(1e-14));

    const auto init = make_initial({2.0, 2.0, 0.3, 5}, g);
    SimState s;
    s.u = init.u;
    s.v = init.v;
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < g.total_cells(); ++i) a += (s.u[i] - 2.0) * (s.u[i] - 2.0);
    for (std::size_t i = 0; i < g.total_cells(); ++i) b += (s.v[i] - 2.0) * (s.v[i] - 2.0);
    const double brute = (a + b) * g.cell_volume();
    CHECK(std::abs(lyapunov(s, p) - brute) <= 1e-14 * brute);
    CHECK(lyapunov(s, p) > 0.0);

    const ModelParams zero{1.0, 0.0, Motility::sigmoid()};
    CHECK_THROWS_AS(lyapunov(s, zero), DiagnosticError);
}

TEST_CASE("mass_oracle closed forms") {
    const ModelParams p1{1.0, 1.0, Motility::sigmoid()};
    CHECK(mass_oracle(0.0, 0.0, p1, 2.0) == 0.0);
    CHECK(mass_oracle(1.0, 0.0, p1, 2.0) == doctest::Approx(1.2642411176571153).epsilon(1e-14));
    CHECK(mass_oracle(1e3, 0.0, p1, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    for (double t : {0.0, 1.0, 50.0}) CHECK(mass_oracle(t, 2.0, p1, 2.0) == doctest::Approx(2.0).epsilon(1e-15));

    const ModelParams p0{1.0, 0.0, Motility::sigmoid()};
    CHECK(mass_oracle(10.0, 2000.0, p0, 2.0) == 2020.0);
}

TEST_CASE("discrete_mass_oracle") {
    const ModelParams p1{1.0, 1.0, Motility::sigmoid()};
    CHECK(discrete_mass_oracle(0, 3.5, 0.1, p1, 2.0) == 3.5);
    CHECK(discrete_mass_oracle(1, 0.0, 0.1, p1, 2.0) == doctest::Approx(0.2).epsilon(1e-15));

    // Closed form r|Omega|/mu + (m0 - r|Omega|/mu)(1 - mu dt)^n.
    const ModelParams p{0.7, 0.3, Motility::sigmoid()};
    const double closed = 0.7 * 2.0 / 0.3 + (5.0 - 0.7 * 2.0 / 0.3) * std::pow(1.0 - 0.3 * 0.01, 250);
    CHECK(discrete_mass_oracle(250, 5.0, 0.01, p, 2.0) == doctest::Approx(closed).epsilon(1e-12));

    const ModelParams p0{1.0, 0.0, Motility::sigmoid()};
    CHECK(discrete_mass_oracle(1000, 7.0, 0.001, p0, 2.0) == doctest::Approx(7.0 + 1000 * 0.001 * 2.0).epsilon(1e-13));

    const std::vector<double> dts{0.1, 0.05, 0.2};
    double m = 1.0;
    for (double dt : dts) m = m + dt * (2.0 - 1.0 * m);
    CHECK(discrete_mass_oracle(dts, 1.0, p1, 2.0) == m);
}

TEST_CASE("continuous and discrete mass agree to O(dt)") {
    const ModelParams p{1.0, 1.0, Motility::sigmoid()};
    const double exact = mass_oracle(10.0, 0.0, p, 2.0);
    const double discrete = discrete_mass_oracle(100000, 0.0, 1e-4, p, 2.0);
    CHECK(std::abs(exact - discrete) / exact < 1e-3);
}

TEST_CASE("fit_decay_rate on exact exponentials") {
    std::vector<TimeSample> series;
    for (int t = 1; t <= 10; ++t) series.push_back({double(t), std::exp(-2.0 * t)});
    const DecayFit fit = fit_decay_rate(series);
    CHECK(std::abs(fit.lambda - 2.0) < 1e-10);
    CHECK(std::abs(fit.r2 - 1.0) < 1e-10);
    CHECK(fit.samples == 5);

    std::vector<TimeSample> scaled;
    for (int t = 0; t <= 40; ++t) scaled.push_back({0.5 * t, 5.0 * std::exp(-0.5 * 0.5 * t)});
    CHECK(std::abs(fit_decay_rate(scaled).lambda - 0.5) < 1e-10);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> rate(0.01, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = rate(rng);
        std::vector<TimeSample> s;
        for (int i = 0; i < 20; ++i) s.push_back({0.1 * i, 3.0 * std::exp(-lambda * 0.1 * i)});
        const DecayFit f = fit_decay_rate(s);
        CHECK(std::abs(f.lambda - lambda) < 1e-10 * std::max(1.0, lambda));
        CHECK(std::abs(f.r2 - 1.0) < 1e-10);
    }
}

TEST_CASE("fit_decay_rate rejects insufficient data") {
    std::vector<TimeSample> s{{0, 1.0}, {1, 0.5}, {2, 0.25}, {3, 0.125}};
    CHECK_THROWS_AS(fit_decay_rate(s), DiagnosticError);
    s.push_back({4, 0.0});  // below the floor
    CHECK_THROWS_AS(fit_decay_rate(s), DiagnosticError);
    s.back().value = 0.0625;
    CHECK(fit_decay_rate(s).lambda == doctest::Approx(std::log(2.0)));
}

TEST_CASE("spatial_contrast") {
    CHECK(spatial_contrast(Field(GridSpec::line(2.0, 5), 3.0)) == 1.0);
    CHECK(spatial_contrast(Field(GridSpec::line(3.0, 3), {0.0, 0.0, 4.0})) == doctest::Approx(3.0));
    CHECK_THROWS_AS(spatial_contrast(Field(GridSpec::line(2.0, 3), 0.0)), DiagnosticError);
    CHECK_THROWS_AS(spatial_contrast(Field(GridSpec::line(2.0, 3), {-1.0, 0.0, 0.5})), DiagnosticError);
}

TEST_CASE("make_record") {
    const GridSpec g = GridSpec::line(2.0, 4);
    SimState s;
    s.u = Field(g, {1.0, 2.0, 3.0, 4.0});
    s.v = Field(g, 2.0);
    s.t = 0.5;
    s.step_count = 3;

    const DiagRecord r = make_record(s, {1.0, 0.5, Motility::sigmoid()}, 0.01);
    CHECK(r.mass_u == doctest::Approx(5.0));
    CHECK(r.mass_v == doctest::Approx(4.0));
    CHECK(r.max_u == 4.0);
    CHECK(r.min_u == 1.0);
    CHECK(*r.linf_dev_u == 2.0);
    CHECK(*r.linf_dev_v == 0.0);
    CHECK(*r.lyapunov == doctest::Approx((1.0 + 0.0 + 1.0 + 4.0) * 0.5));
    CHECK(*r.contrast_u == doctest::Approx(4.0 / 2.5));

    const DiagRecord z = make_record(s, {1.0, 0.0, Motility::sigmoid()}, 0.01);
    CHECK_FALSE(z.lyapunov.has_value());
    CHECK_FALSE(z.linf_dev_u.has_value());
}

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ksim/grid.hpp"

using namespace ksim;

namespace {

// Independent 1D stencil with mirror ghosts, written out per cell.
std::vector<double> brute_laplacian_1d(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i == 0 ? f[0] : f[i - 1];
        const double right = i == n - 1 ? f[n - 1] : f[i + 1];
        out[i] = (left - 2.0 * f[i] + right) / (h * h);
    }
    return out;
}

Field cosine_along(const GridSpec& g, int axis) {
    Field f(g);
    const double L = g.length(axis);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const int c = g.unravel(i)[static_cast<std::size_t>(axis)];
        f[i] = std::cos(std::numbers::pi * g.center(axis, c) / L);
    }
    return f;
}

double eigen_error(const GridSpec& g, int axis) {
    const Field f = cosine_along(g, axis);
    const Field lap = laplacian(f);
    const double k2 = std::pow(std::numbers::pi / g.length(axis), 2);
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(lap[i] + k2 * f[i]));
    return err;
}

GridSpec random_grid(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim_dist(1, 3);
    std::uniform_real_distribution<double> len(0.5, 3.0);
    const int dim = dim_dist(rng);
    std::uniform_int_distribution<int> cells_dist(3, dim == 1 ? 200 : (dim == 2 ? 40 : 12));
    std::vector<double> lengths;
    std::vector<int> cells;
    for (int a = 0; a < dim; ++a) {
        lengths.push_back(len(rng));
        cells.push_back(cells_dist(rng));
    }
    return GridSpec(dim, lengths, cells);
}

Field random_field(const GridSpec& g, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Field f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = d(rng);
    return f;
}

}  // namespace

TEST_CASE("GridSpec geometry") {
    const double l[] = {2.0, 1.0};
    const int n[] = {4, 5};
    const GridSpec g(2, l, n);
    CHECK(g.total_cells() == 20);
    CHECK(g.cell_volume() == doctest::Approx(0.5 * 0.2));
    CHECK(g.domain_volume() == doctest::Approx(2.0));
    CHECK(g.center(0, 0) == 0.25);
    CHECK(g.center(0, 3) == 1.75);
    CHECK(g.stride(0) == 5);
    CHECK(g.stride(1) == 1);
    const auto idx = g.unravel(7);
    CHECK(idx[0] == 1);
    CHECK(idx[1] == 2);
}

TEST_CASE("GridSpec rejects invalid shapes") {
    CHECK_THROWS_AS(GridSpec::line(2.0, 2), ContractViolation);
    CHECK_THROWS_AS(GridSpec::line(0.0, 8), ContractViolation);
    CHECK_THROWS_AS(GridSpec::line(-1.0, 8), ContractViolation);
    const double l[] = {1.0};
    const int n[] = {4};
    CHECK_THROWS_AS(GridSpec(4, l, n), ContractViolation);
    CHECK_THROWS_AS(Field(GridSpec::line(1.0, 4), std::vector<double>(3)), ContractViolation);
}

TEST_CASE("laplacian of a constant is zero") {
    for (const auto& g : {GridSpec::line(2.0, 7), GridSpec::square(2.0, 5), GridSpec::cube(1.5, 4)}) {
        const Field lap = laplacian(Field(g, 3.25));
        for (double x : lap.values()) CHECK(x == 0.0);
    }
}

TEST_CASE("laplacian matches independent 1D stencil") {
    std::mt19937_64 rng(11);
    const GridSpec g = GridSpec::line(2.0, 33);
    const Field f = random_field(g, rng, 5.0);
    const Field lap = laplacian(f);
    const auto ref = brute_laplacian_1d({f.values().begin(), f.values().end()}, g.spacing(0));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(lap[i] == doctest::Approx(ref[i]).epsilon(1e-14));
}

TEST_CASE("laplacian of the Neumann cosine, 1D L=2 n=64") {
    const GridSpec g = GridSpec::line(2.0, 64);
    const double h = g.spacing(0);
    const double L = 2.0;
    // Sampled cos(pi x / L) is an exact eigenvector of the mirrored stencil with
    // eigenvalue -(4/h^2) sin^2(pi h / 2L); the error against -(pi/L)^2 f is
    // therefore |(pi/L)^2 - (4/h^2) sin^2(pi h / 2L)| * max|f|.
    const double k2 = std::pow(std::numbers::pi / L, 2);
    const double discrete = 4.0 / (h * h) * std::pow(std::sin(std::numbers::pi * h / (2.0 * L)), 2);
    const double bound = std::abs(k2 - discrete) * std::cos(std::numbers::pi * h / (2.0 * L));

    const double err = eigen_error(g, 0);
    CHECK(err == doctest::Approx(bound).epsilon(1e-6));
    CHECK(err == doctest::Approx(4.952592576321177e-4).epsilon(1e-9));
}

TEST_CASE("laplacian of a linear ramp") {
    const GridSpec g = GridSpec::line(2.0, 16);
    Field f(g);
    for (int i = 0; i < 16; ++i) f[static_cast<std::size_t>(i)] = g.center(0, i);
    const Field lap = laplacian(f);
    const double h = g.spacing(0);
    CHECK(lap[0] == doctest::Approx(1.0 / h));
    CHECK(lap[15] == doctest::Approx(-1.0 / h));
    for (std::size_t i = 1; i < 15; ++i) CHECK(std::abs(lap[i]) < 1e-12);
    CHECK(std::abs(integrate(lap)) < 1e-12);
}

TEST_CASE("stencil is second order along every axis") {
    for (int dim = 1; dim <= 2; ++dim) {
        for (int axis = 0; axis < dim; ++axis) {
            const GridSpec coarse = dim == 1 ? GridSpec::line(2.0, 64) : GridSpec::square(2.0, 64);
            const GridSpec fine = dim == 1 ? GridSpec::line(2.0, 128) : GridSpec::square(2.0, 128);
            const double ratio = eigen_error(coarse, axis) / eigen_error(fine, axis);
            CHECK(ratio >= 3.5);
            CHECK(ratio <= 4.5);
        }
    }
}

TEST_CASE("integrate") {
    CHECK(integrate(Field(GridSpec::line(2.0, 3), 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(integrate(Field(GridSpec::line(2.0, 1000), 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(integrate(Field(GridSpec::square(2.0, 17), 1000.0)) == doctest::Approx(4000.0).epsilon(1e-14));

    std::mt19937_64 rng(2024);
    const GridSpec g = GridSpec::line(2.0, 16);
    Field f(g, 1.0);
    std::uniform_real_distribution<double> d(-0.1, 0.1);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += d(rng);
    long double brute = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) brute += static_cast<long double>(f[i]) * (2.0L / 16.0L);
    CHECK(integrate(f) == doctest::Approx(static_cast<double>(brute)).epsilon(1e-14));
}

TEST_CASE("linf_deviation and l2_sq_deviation") {
    const GridSpec g = GridSpec::line(3.0, 3);
    CHECK(linf_deviation(Field(g, {0.9, 1.1, 1.0}), 1.0) == doctest::Approx(0.1));
    CHECK(linf_deviation(Field(g, 4.0), 4.0) == 0.0);
    CHECK(l2_sq_deviation(Field(g, 4.0), 4.0) == 0.0);
    CHECK(l2_sq_deviation(Field(GridSpec::line(2.0, 9), 3.0), 2.0) == doctest::Approx(2.0).epsilon(1e-14));

    std::mt19937_64 rng(5);
    const GridSpec big = GridSpec::square(2.0, 20);
    const Field f = random_field(big, rng, 3.0);
    double scan = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        scan = std::max(scan, std::abs(f[i] - 0.5));
        acc += (f[i] - 0.5) * (f[i] - 0.5);
    }
    CHECK(linf_deviation(f, 0.5) == scan);
    CHECK(l2_sq_deviation(f, 0.5) == doctest::Approx(acc * big.cell_volume()).epsilon(1e-15));
}

TEST_CASE("property: quadrature exactness and discrete conservation") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const GridSpec g = random_grid(rng);
        const double c = std::uniform_real_distribution<double>(-50.0, 50.0)(rng);
        const double vol = g.domain_volume();
        // Sequential summation: relative error at most N machine epsilons.
        const double tol = static_cast<double>(g.total_cells()) * 2.3e-16;
        CHECK(std::abs(integrate(Field(g, c)) - c * vol) <= tol * std::abs(c * vol));

        const Field f = random_field(g, rng, 10.0);
        const double norm = linf_deviation(f, 0.0);
        CHECK(std::abs(integrate(laplacian(f))) <= 1e-12 * norm * vol);
    }
}

TEST_CASE("property: operations are deterministic") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const GridSpec g = random_grid(rng);
        const Field f = random_field(g, rng, 1.0);
        CHECK(laplacian(f) == laplacian(Field(f)));
        CHECK(integrate(f) == integrate(Field(f)));
        CHECK(l2_sq_deviation(f, 0.1) == l2_sq_deviation(Field(f), 0.1));
    }
}

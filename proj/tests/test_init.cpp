#include <cmath>
#include <random>

#include "doctest.h"
#include "ksim/init.hpp"

using namespace ksim;

TEST_CASE("zero amplitude gives exactly constant fields") {
    const auto init = make_initial({1000.0, 1000.0, 0.0, 42}, GridSpec::square(2.0, 8));
    for (double x : init.u.values()) CHECK(x == 1000.0);
    for (double x : init.v.values()) CHECK(x == 1000.0);
    CHECK(init.clamped == 0);
}

TEST_CASE("documented generator: u from seed, v from seed + 1") {
    const GridSpec g = GridSpec::line(2.0, 8);
    const InitSpec spec{5.0, 7.0, 0.5, 99};
    const auto init = make_initial(spec, g);

    std::mt19937_64 ru(99);
    std::mt19937_64 rv(100);
    for (std::size_t i = 0; i < g.total_cells(); ++i) {
        const double xi = 2.0 * (static_cast<double>(ru() >> 11) / 9007199254740992.0) - 1.0;
        const double eta = 2.0 * (static_cast<double>(rv() >> 11) / 9007199254740992.0) - 1.0;
        CHECK(init.u[i] == 5.0 + 0.5 * xi);
        CHECK(init.v[i] == 7.0 + 0.5 * eta);
    }
}

TEST_CASE("the MT19937-64 stream is the published one") {
    // 10000th output of the default-seeded generator, fixed by the C++ standard.
    std::mt19937_64 rng;
    rng.discard(9999);
    CHECK(rng() == 9981545732273789042ULL);
}

TEST_CASE("clamping at zero with base 0") {
    const GridSpec g = GridSpec::line(2.0, 8);
    const auto a = make_initial({0.0, 0.0, 1.0, 7}, g);
    const auto b = make_initial({0.0, 0.0, 1.0, 8}, g);
    for (double x : a.u.values()) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    CHECK(a.clamped > 0);
    CHECK(a.u != b.u);
}

TEST_CASE("same seed gives bit-identical fields") {
    const GridSpec g = GridSpec::cube(2.0, 6);
    const InitSpec spec{1.0, 1.0, 0.01, 1234};
    const auto a = make_initial(spec, g);
    const auto b = make_initial(spec, g);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
}

TEST_CASE("property: values finite, non-negative, mean near base") {
    const GridSpec g = GridSpec::square(2.0, 100);
    for (std::uint64_t seed : {1ULL, 2ULL, 77ULL, 123456789ULL}) {
        for (double base : {1.0, 100.0, 1000.0}) {
            const double amp = 0.01 * base;
            const auto init = make_initial({base, base, amp, seed}, g);
            double sum = 0.0;
            for (double x : init.u.values()) {
                REQUIRE(std::isfinite(x));
                REQUIRE(x >= 0.0);
                REQUIRE(std::abs(x - base) <= amp);
                sum += x;
            }
            CHECK(std::abs(sum / static_cast<double>(init.u.size()) - base) <= 0.05 * amp);
        }
    }
}

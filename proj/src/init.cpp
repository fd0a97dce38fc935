#include "ksim/init.hpp"

#include <random>

namespace ksim {

double unit_symmetric(std::uint64_t raw) {
    constexpr double two_pow_m53 = 1.0 / 9007199254740992.0;
    return 2.0 * (static_cast<double>(raw >> 11) * two_pow_m53) - 1.0;
}

namespace {

Field perturbed(const GridSpec& grid, double base, double amplitude, std::uint64_t seed,
                std::size_t& clamped) {
    Field f(grid);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = base + amplitude * unit_symmetric(rng());
        if (x < 0.0) {
            f[i] = 0.0;
            ++clamped;
        } else {
            f[i] = x;
        }
    }
    return f;
}

}  // namespace

InitialFields make_initial(const InitSpec& spec, const GridSpec& grid) {
    InitialFields out;
    out.u = perturbed(grid, spec.base_u, spec.amplitude, spec.seed, out.clamped);
    out.v = perturbed(grid, spec.base_v, spec.amplitude, spec.seed + 1, out.clamped);
    return out;
}

}  // namespace ksim

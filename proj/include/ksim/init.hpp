#pragma once

#include <cstddef>
#include <cstdint>

#include "ksim/grid.hpp"

namespace ksim {

struct InitSpec {
    double base_u = 0.0;
    double base_v = 0.0;
    double amplitude = 0.0;  // half-width of the uniform perturbation
    std::uint64_t seed = 1;
};

struct InitialFields {
    Field u;
    Field v;
    std::size_t clamped = 0;  // number of cells raised to zero
};

/**
 * u0_i = max(0, base_u + amplitude * xi_i), v0_i = max(0, base_v + amplitude * eta_i).
 *
 * xi and eta are i.i.d. uniform on [-1, 1), generated in flat cell order by
 * MT19937-64 (Matsumoto & Nishimura, 64-bit variant) seeded with `seed` for u
 * and `seed + 1` for v. Each raw 64-bit output x maps to
 * 2 * ((x >> 11) * 2^-53) - 1, so the stream is identical on every platform.
 */
InitialFields make_initial(const InitSpec& spec, const GridSpec& grid);

/// The uniform [-1, 1) sequence used above, exposed for tests.
double unit_symmetric(std::uint64_t raw);

}  // namespace ksim

#pragma once

#include <cstdint>

#include "ksim/grid.hpp"

namespace ksim {

/// (t, u, v) of the coupled system; u and v share one grid.
struct SimState {
    double t = 0.0;
    Field u;
    Field v;
    std::int64_t step_count = 0;

    const GridSpec& grid() const { return u.spec(); }
    bool finite() const { return u.all_finite() && v.all_finite(); }
};

}  // namespace ksim

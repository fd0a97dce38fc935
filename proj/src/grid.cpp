#include "ksim/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ksim {

GridSpec::GridSpec(int dim, std::span<const double> lengths, std::span<const int> cells) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw ContractViolation("grid dim must be 1, 2 or 3, got " + std::to_string(dim));
    }
    if (lengths.size() != static_cast<std::size_t>(dim) || cells.size() != static_cast<std::size_t>(dim)) {
        throw ContractViolation("grid lengths/cells must have exactly dim entries");
    }
    for (int a = 0; a < dim; ++a) {
        const auto i = static_cast<std::size_t>(a);
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
            throw ContractViolation("grid lengths must be positive and finite");
        }
        if (cells[i] < 3) {
            throw ContractViolation("cells must be >= 3");
        }
        lengths_[i] = lengths[i];
        cells_[i] = cells[i];
    }
    for (int a = dim; a < kMaxDim; ++a) {
        lengths_[static_cast<std::size_t>(a)] = 1.0;
        cells_[static_cast<std::size_t>(a)] = 1;
    }
}

GridSpec GridSpec::line(double length, int cells) {
    const double l[] = {length};
    const int n[] = {cells};
    return GridSpec(1, l, n);
}

GridSpec GridSpec::square(double length, int cells) {
    const double l[] = {length, length};
    const int n[] = {cells, cells};
    return GridSpec(2, l, n);
}

GridSpec GridSpec::cube(double length, int cells) {
    const double l[] = {length, length, length};
    const int n[] = {cells, cells, cells};
    return GridSpec(3, l, n);
}

double GridSpec::min_spacing() const {
    double h = spacing(0);
    for (int a = 1; a < dim_; ++a) h = std::min(h, spacing(a));
    return h;
}

std::size_t GridSpec::total_cells() const {
    std::size_t n = 1;
    for (int a = 0; a < dim_; ++a) n *= static_cast<std::size_t>(cells(a));
    return n;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing(a);
    return v;
}

double GridSpec::domain_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= length(a);
    return v;
}

std::size_t GridSpec::stride(int axis) const {
    std::size_t s = 1;
    for (int a = dim_ - 1; a > axis; --a) s *= static_cast<std::size_t>(cells(a));
    return s;
}

std::array<int, kMaxDim> GridSpec::unravel(std::size_t flat) const {
    std::array<int, kMaxDim> idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        const auto n = static_cast<std::size_t>(cells(a));
        idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % n);
        flat /= n;
    }
    return idx;
}

Field::Field(GridSpec spec, double fill) : spec_(spec), values_(spec.total_cells(), fill) {}

Field::Field(GridSpec spec, std::vector<double> values) : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.total_cells()) {
        throw ContractViolation("field has " + std::to_string(values_.size()) + " values, grid has " +
                                std::to_string(spec_.total_cells()) + " cells");
    }
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

void laplacian_into(const GridSpec& spec, std::span<const double> in, std::span<double> out) {
    const std::size_t total = spec.total_cells();
    if (in.size() != total || out.size() != total) {
        throw ContractViolation("laplacian: buffer size does not match grid");
    }

    // The first axis assigns, later axes accumulate.
    for (int axis = 0; axis < spec.dim(); ++axis) {
        const std::size_t n = static_cast<std::size_t>(spec.cells(axis));
        const std::size_t inner = spec.stride(axis);
        const std::size_t outer = total / (n * inner);
        const double inv_h2 = 1.0 / (spec.spacing(axis) * spec.spacing(axis));
        const bool assign = axis == 0;

        for (std::size_t o = 0; o < outer; ++o) {
            const std::size_t base = o * n * inner;
            if (inner == 1) {
                // Contiguous axis: mirror ghosts make the end stencils one-sided.
                const double* f = in.data() + base;
                double* dst = out.data() + base;
                const double first = (f[1] - f[0]) * inv_h2;
                const double last = (f[n - 2] - f[n - 1]) * inv_h2;
                if (assign) {
                    dst[0] = first;
                    for (std::size_t c = 1; c + 1 < n; ++c) dst[c] = (f[c - 1] - 2.0 * f[c] + f[c + 1]) * inv_h2;
                    dst[n - 1] = last;
                } else {
                    dst[0] += first;
                    for (std::size_t c = 1; c + 1 < n; ++c) dst[c] += (f[c - 1] - 2.0 * f[c] + f[c + 1]) * inv_h2;
                    dst[n - 1] += last;
                }
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                // Mirror ghosts: the value beyond a face equals the boundary cell.
                const std::size_t cm = (c == 0) ? 0 : c - 1;
                const std::size_t cp = (c + 1 == n) ? c : c + 1;
                const double* lo = in.data() + base + cm * inner;
                const double* mid = in.data() + base + c * inner;
                const double* hi = in.data() + base + cp * inner;
                double* dst = out.data() + base + c * inner;
                if (assign) {
                    for (std::size_t k = 0; k < inner; ++k) dst[k] = (lo[k] - 2.0 * mid[k] + hi[k]) * inv_h2;
                } else {
                    for (std::size_t k = 0; k < inner; ++k) dst[k] += (lo[k] - 2.0 * mid[k] + hi[k]) * inv_h2;
                }
            }
        }
    }
}

Field laplacian(const Field& f) {
    Field out(f.spec());
    laplacian_into(f.spec(), f.values(), out.values());
    return out;
}

double integrate(const Field& f) {
    double sum = 0.0;
    for (double x : f.values()) sum += x;
    return sum * f.spec().cell_volume();
}

double linf_deviation(const Field& f, double c) {
    double m = 0.0;
    for (double x : f.values()) {
        const double d = std::abs(x - c);
        if (d > m || std::isnan(d)) m = d;
    }
    return m;
}

double l2_sq_deviation(const Field& f, double c) {
    double sum = 0.0;
    for (double x : f.values()) sum += (x - c) * (x - c);
    return sum * f.spec().cell_volume();
}

double mean(const Field& f) {
    double sum = 0.0;
    for (double x : f.values()) sum += x;
    return sum / static_cast<double>(f.size());
}

}  // namespace ksim

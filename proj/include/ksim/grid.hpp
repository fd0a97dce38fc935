#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksim {

/// Thrown when an operation is called with arguments that break its
/// documented preconditions (shape mismatch, non-positive horizon, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline constexpr int kMaxDim = 3;

/**
 * Uniform cell-centered grid on the box [0, L_0] x ... x [0, L_{dim-1}].
 *
 * Cell i along axis a has its center at (i + 1/2) h_a with h_a = L_a / n_a.
 * Flat storage is row-major: the last axis varies fastest.
 */
class GridSpec {
public:
    GridSpec() = default;
    GridSpec(int dim, std::span<const double> lengths, std::span<const int> cells);

    static GridSpec line(double length, int cells);
    static GridSpec square(double length, int cells);
    static GridSpec cube(double length, int cells);

    int dim() const { return dim_; }
    double length(int axis) const { return lengths_.at(static_cast<std::size_t>(axis)); }
    int cells(int axis) const { return cells_.at(static_cast<std::size_t>(axis)); }
    double spacing(int axis) const { return length(axis) / cells(axis); }
    double min_spacing() const;

    std::size_t total_cells() const;
    double cell_volume() const;
    double domain_volume() const;

    /// Distance between consecutive flat indices along `axis`.
    std::size_t stride(int axis) const;
    double center(int axis, int index) const { return (index + 0.5) * spacing(axis); }

    /// Per-axis indices of the cell stored at `flat`.
    std::array<int, kMaxDim> unravel(std::size_t flat) const;

    bool operator==(const GridSpec&) const = default;

private:
    int dim_ = 1;
    std::array<double, kMaxDim> lengths_{1.0, 1.0, 1.0};
    std::array<int, kMaxDim> cells_{3, 1, 1};
};

/// Scalar values on the cells of a grid.
class Field {
public:
    Field() = default;
    explicit Field(GridSpec spec, double fill = 0.0);
    Field(GridSpec spec, std::vector<double> values);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool all_finite() const;
    double min() const;
    double max() const;

    bool operator==(const Field&) const = default;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// Second-order Laplacian with mirror ghost cells (zero normal flux).
Field laplacian(const Field& f);

/// Writes the Laplacian of `in` into `out`; both spans must hold
/// spec.total_cells() values and must not alias.
void laplacian_into(const GridSpec& spec, std::span<const double> in, std::span<double> out);

/// Sum of values times cell volume, summed sequentially in storage order.
double integrate(const Field& f);

double linf_deviation(const Field& f, double c);

/// Sum of (f_i - c)^2 times cell volume, sequential order.
double l2_sq_deviation(const Field& f, double c);

double mean(const Field& f);

}  // namespace ksim

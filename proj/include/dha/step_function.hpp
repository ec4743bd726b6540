#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dha/dyadic.hpp"
#include "dha/numeric.hpp"

namespace dha {

/// Finitely supported piecewise-constant function on a uniform dyadic grid.
///
/// Represents sum_j values[j] * chi_[(start+j) 2^m, (start+j+1) 2^m) with
/// m = cell_scale. Cells are addressed by their global index start+j, so
/// the origin is always a cell boundary. Values outside the stored extent
/// are zero.
class StepFunction {
public:
    StepFunction() = default;
    StepFunction(int cell_scale, std::int64_t cell_start, std::vector<double> values);

    /// The zero function with an empty extent.
    static StepFunction zero(int cell_scale) { return {cell_scale, 0, {}}; }

    /// height * chi_J on the grid of scale `cell_scale`.
    static StepFunction indicator(const GridInterval& J, int cell_scale, double height = 1.0);

    int cell_scale() const noexcept { return cell_scale_; }
    std::int64_t cell_start() const noexcept { return cell_start_; }
    std::int64_t cell_end() const noexcept {
        return cell_start_ + static_cast<std::int64_t>(values_.size());
    }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    std::span<const double> values() const noexcept { return values_; }

    double cell_length() const noexcept { return pow2(cell_scale_); }
    double cell_lo(std::int64_t idx) const noexcept {
        return std::ldexp(static_cast<double>(idx), cell_scale_);
    }
    double lo() const noexcept { return cell_lo(cell_start_); }
    double hi() const noexcept { return cell_lo(cell_end()); }
    GridInterval extent() const noexcept { return {lo(), hi()}; }

    /// Value of the cell with global index `idx` (zero outside the extent).
    double at_cell(std::int64_t idx) const noexcept {
        if (idx < cell_start_ || idx >= cell_end()) return 0.0;
        return values_[static_cast<std::size_t>(idx - cell_start_)];
    }
    double operator()(double x) const noexcept;

    /// Global index of the cell containing x.
    std::int64_t cell_of(double x) const noexcept {
        return static_cast<std::int64_t>(std::floor(std::ldexp(x, -cell_scale_)));
    }

    /// Same function on the finer grid of scale `new_scale` <= cell_scale().
    StepFunction refined(int new_scale) const;

    /// Same function stored on the cell range [first, last). Throws
    /// RangeError if a nonzero cell would be dropped.
    StepFunction with_extent(std::int64_t first, std::int64_t last) const;

    /// Restrict storage to the hull of the nonzero cells.
    StepFunction trimmed() const;

    /// Hull of the nonzero cells, if any.
    std::optional<GridInterval> support() const;

    double sup_abs() const noexcept;
    double l1_norm() const;
    /// Exact up to one rounding per cell (compensated summation).
    double integral() const;

    /// Bitwise equality of grid and stored values.
    bool operator==(const StepFunction& o) const noexcept = default;

private:
    int cell_scale_ = 0;
    std::int64_t cell_start_ = 0;
    std::vector<double> values_;
};

/// alpha*f + beta*g on the common refinement and union extent.
StepFunction combine(const StepFunction& f, double alpha, const StepFunction& g, double beta);

inline StepFunction operator+(const StepFunction& f, const StepFunction& g) {
    return combine(f, 1.0, g, 1.0);
}
inline StepFunction operator-(const StepFunction& f, const StepFunction& g) {
    return combine(f, 1.0, g, -1.0);
}
StepFunction operator*(double alpha, const StepFunction& f);

/// Put `f` and `g` on a common grid (finest scale, union extent).
std::pair<StepFunction, StepFunction> common_grid(const StepFunction& f, const StepFunction& g);

/// Largest cellwise difference after common refinement.
double max_difference(const StepFunction& f, const StepFunction& g);

/// True when f and g represent the same function (bitwise per cell after
/// common refinement).
bool same_function(const StepFunction& f, const StepFunction& g);

/// Dense copy of the cells [first, last) at f's scale, zero outside f.
std::vector<double> cells(const StepFunction& f, std::int64_t first, std::int64_t last);

/// H1-normalized Haar function H_I: +1/|I| on I_L, -1/|I| on I_R.
StepFunction haar(const DyadicInterval& I, int cell_scale);

/// Special atom b_{n,k} = 2^-(n+1) [chi_[(k-1)2^n, k 2^n) - chi_[k 2^n, (k+1)2^n)].
StepFunction special_atom(int n, std::int64_t k, int cell_scale);

/// The function b = b_{0,0}.
inline StepFunction b_function(int cell_scale = -1) { return special_atom(0, 0, cell_scale); }

/// Exact integral of f over J. J must be aligned to f's grid.
double integrate(const StepFunction& f, const GridInterval& J);

/// Integral over J, refining f first when J is finer than f's cells.
double integrate_refining(const StepFunction& f, const GridInterval& J);

enum class Side { negative, positive };

/// Zero every cell on the complementary side of the origin.
StepFunction restrict(const StepFunction& f, Side keep);

/// Even / odd extension of a function vanishing on (-inf, 0).
StepFunction reflect_even(const StepFunction& f);
StepFunction reflect_odd(const StepFunction& f);

}  // namespace dha

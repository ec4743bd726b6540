#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "dha/numeric.hpp"

namespace dha {

/// Half-open interval [lo, hi) with dyadic-rational endpoints.
///
/// Endpoints are stored as doubles; every dyadic rational used by the
/// library is exactly representable, so comparisons are exact.
struct GridInterval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return x >= lo && x < hi; }
    bool contains(const GridInterval& o) const noexcept { return o.lo >= lo && o.hi <= hi; }
    bool one_sided() const noexcept { return hi <= 0.0 || lo >= 0.0; }

    /// True when both endpoints are integer multiples of 2^scale.
    bool aligned_to(int scale) const noexcept;

    auto operator<=>(const GridInterval&) const = default;
};

/// I_{n,k} = [k 2^n, (k+1) 2^n).
struct DyadicInterval {
    int n = 0;
    std::int64_t k = 0;

    double length() const noexcept { return pow2(n); }
    double lo() const noexcept { return std::ldexp(static_cast<double>(k), n); }
    double hi() const noexcept { return std::ldexp(static_cast<double>(k + 1), n); }
    GridInterval grid() const noexcept { return {lo(), hi()}; }

    DyadicInterval left_half() const noexcept { return {n - 1, 2 * k}; }
    DyadicInterval right_half() const noexcept { return {n - 1, 2 * k + 1}; }
    DyadicInterval parent() const noexcept { return {n + 1, floor_div(k, 2)}; }

    bool contains(const DyadicInterval& o) const noexcept;

    auto operator<=>(const DyadicInterval&) const = default;
};

/// Intersection of two dyadic intervals; by nestedness it is empty or the
/// smaller of the two.
std::optional<DyadicInterval> intersect(const DyadicInterval& a, const DyadicInterval& b);

/// The dyadic interval equal to `J`, if there is one.
std::optional<DyadicInterval> as_dyadic(const GridInterval& J);

/// Smallest dyadic interval containing `J`. Empty when `J` straddles the
/// origin, since no dyadic interval does.
std::optional<DyadicInterval> smallest_dyadic_cover(const GridInterval& J);

std::string to_string(const DyadicInterval& I);
std::string to_string(const GridInterval& J);

}  // namespace dha

#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace dha {

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

/// Library-wide base tolerance, 2^-40 unless DHT_TOLERANCE is set.
double tolerance();

/// 2^e as a double (exact for the exponents used here).
inline double pow2(int e) noexcept { return std::ldexp(1.0, e); }

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) noexcept {
    return -floor_div(-a, b);
}

/// Scale window [min, max] for cell scales of generated functions.
struct ScaleWindow {
    int min = -20;
    int max = 20;

    bool contains(int m) const noexcept { return m >= min && m <= max; }
};

/// Hard cap on materialized cell counts.
inline constexpr std::int64_t kMaxCells = std::int64_t{1} << 24;

}  // namespace dha

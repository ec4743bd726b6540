#pragma once

#include <cstdint>
#include <random>

#include "dha/atoms.hpp"

namespace dha {

/// Seeded generator used by every randomized suite. Draws are taken from raw
/// 64-bit output so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

private:
    std::mt19937_64 engine_;
};

/// Round to a multiple of 2^-24 so sums over short grids stay exact.
inline double quantize(double x) { return std::nearbyint(std::ldexp(x, 24)) * 0x1.0p-24; }

/// Random grid interval with at most `max_cells` cells of scale `cell_scale`
/// inside [lo, hi).
GridInterval random_interval(Rng& rng, int cell_scale, std::int64_t max_cells, double lo, double hi);

/// Random atom on `I`: values uniform in [-1, 1] (quantized), mean removed,
/// rescaled by the smallest power of two restoring the size bound, then
/// divided by |I|. Dyadic defining intervals give exactly zero integrals.
Atom random_atom(Rng& rng, const GridInterval& I, int cell_scale);

/// Random dyadic-valued step function on [lo, hi) at scale `cell_scale`,
/// values uniform in [-amplitude, amplitude] (quantized).
StepFunction random_step(Rng& rng, int cell_scale, double lo, double hi, double amplitude = 1.0);

/// Random step function with zero integral on each half-line; the extent
/// [-2^L, 2^L) is split at the origin and each half has its mean removed
/// exactly.
StepFunction random_ha_function(Rng& rng, int cell_scale, int L);

}  // namespace dha

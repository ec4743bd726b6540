#include "dha/random.hpp"

#include <algorithm>
#include <cmath>

#include "dha/errors.hpp"

namespace dha {

GridInterval random_interval(Rng& rng, int cell_scale, std::int64_t max_cells, double lo, double hi) {
    const auto first = static_cast<std::int64_t>(std::ceil(std::ldexp(lo, -cell_scale)));
    const auto last = static_cast<std::int64_t>(std::floor(std::ldexp(hi, -cell_scale)));
    if (last <= first) throw DomainError("random_interval: window holds no cell");
    const std::int64_t len = rng.integer(1, std::min(max_cells, last - first));
    const std::int64_t start = rng.integer(first, last - len);
    return {std::ldexp(static_cast<double>(start), cell_scale),
            std::ldexp(static_cast<double>(start + len), cell_scale)};
}

namespace {

void remove_mean(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    const double mean = s / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

}  // namespace

Atom random_atom(Rng& rng, const GridInterval& I, int cell_scale) {
    if (!I.aligned_to(cell_scale)) throw AlignmentError("random_atom: interval not on the grid");
    const auto first = static_cast<std::int64_t>(std::ldexp(I.lo, -cell_scale));
    const auto last = static_cast<std::int64_t>(std::ldexp(I.hi, -cell_scale));
    std::vector<double> v(static_cast<std::size_t>(last - first));
    for (double& x : v) x = quantize(rng.uniform(-1.0, 1.0));
    if (v.size() == 1) v[0] = 0.0;
    remove_mean(v);
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::fabs(x));
    int e = 0;
    while (std::ldexp(sup, -e) > 1.0) ++e;
    const double scale = std::ldexp(1.0, -e) / I.length();
    for (double& x : v) x *= scale;
    return Atom{StepFunction(cell_scale, first, std::move(v)), I};
}

StepFunction random_step(Rng& rng, int cell_scale, double lo, double hi, double amplitude) {
    const auto first = static_cast<std::int64_t>(std::ldexp(lo, -cell_scale));
    const auto last = static_cast<std::int64_t>(std::ldexp(hi, -cell_scale));
    std::vector<double> v(static_cast<std::size_t>(last - first));
    for (double& x : v) x = quantize(rng.uniform(-amplitude, amplitude));
    return {cell_scale, first, std::move(v)};
}

StepFunction random_ha_function(Rng& rng, int cell_scale, int L) {
    const std::int64_t half = std::int64_t{1} << (L - cell_scale);
    std::vector<double> neg(static_cast<std::size_t>(half));
    std::vector<double> pos(static_cast<std::size_t>(half));
    for (double& x : neg) x = quantize(rng.uniform(-1.0, 1.0));
    for (double& x : pos) x = quantize(rng.uniform(-1.0, 1.0));
    remove_mean(neg);
    remove_mean(pos);
    neg.insert(neg.end(), pos.begin(), pos.end());
    return {cell_scale, -half, std::move(neg)};
}

}  // namespace dha

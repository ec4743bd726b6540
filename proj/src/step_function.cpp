#include "dha/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dha/errors.hpp"

namespace dha {

namespace {

constexpr int kHardScaleLimit = 900;

std::int64_t cells_per(int coarse, int fine) {
    const int r = coarse - fine;
    if (r < 0) throw ResolutionError("grid of scale " + std::to_string(fine) +
                                     " cannot be coarsened to " + std::to_string(coarse));
    if (r > 40) throw RangeError("refinement by 2^" + std::to_string(r) + " is out of range");
    return std::int64_t{1} << r;
}

void check_cell_count(std::int64_t n) {
    if (n < 0 || n > kMaxCells) {
        throw RangeError("cell count " + std::to_string(n) + " exceeds the materialization cap");
    }
}

}  // namespace

StepFunction::StepFunction(int cell_scale, std::int64_t cell_start, std::vector<double> values)
    : cell_scale_(cell_scale), cell_start_(cell_start), values_(std::move(values)) {
    if (cell_scale < -kHardScaleLimit || cell_scale > kHardScaleLimit) {
        throw RangeError("cell scale " + std::to_string(cell_scale) + " is not representable");
    }
    check_cell_count(static_cast<std::int64_t>(values_.size()));
}

StepFunction StepFunction::indicator(const GridInterval& J, int cell_scale, double height) {
    if (!(J.hi > J.lo)) throw DomainError("indicator of an empty interval");
    if (!J.aligned_to(cell_scale)) {
        throw AlignmentError("interval " + to_string(J) + " is not aligned to scale " +
                             std::to_string(cell_scale));
    }
    const auto first = static_cast<std::int64_t>(std::ldexp(J.lo, -cell_scale));
    const auto last = static_cast<std::int64_t>(std::ldexp(J.hi, -cell_scale));
    check_cell_count(last - first);
    return {cell_scale, first, std::vector<double>(static_cast<std::size_t>(last - first), height)};
}

double StepFunction::operator()(double x) const noexcept { return at_cell(cell_of(x)); }

StepFunction StepFunction::refined(int new_scale) const {
    if (new_scale == cell_scale_) return *this;
    const std::int64_t r = cells_per(cell_scale_, new_scale);
    check_cell_count(static_cast<std::int64_t>(values_.size()) * r);
    std::vector<double> out;
    out.reserve(values_.size() * static_cast<std::size_t>(r));
    for (double v : values_) out.insert(out.end(), static_cast<std::size_t>(r), v);
    return {new_scale, cell_start_ * r, std::move(out)};
}

StepFunction StepFunction::with_extent(std::int64_t first, std::int64_t last) const {
    if (last < first) throw DomainError("with_extent: empty range reversed");
    check_cell_count(last - first);
    for (std::int64_t i = cell_start_; i < cell_end(); ++i) {
        if ((i < first || i >= last) && at_cell(i) != 0.0) {
            throw RangeError("with_extent would drop a nonzero cell");
        }
    }
    return {cell_scale_, first, cells(*this, first, last)};
}

StepFunction StepFunction::trimmed() const {
    std::size_t a = 0;
    std::size_t b = values_.size();
    while (a < b && values_[a] == 0.0) ++a;
    while (b > a && values_[b - 1] == 0.0) --b;
    return {cell_scale_, cell_start_ + static_cast<std::int64_t>(a),
            std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(a),
                                values_.begin() + static_cast<std::ptrdiff_t>(b))};
}

std::optional<GridInterval> StepFunction::support() const {
    const StepFunction t = trimmed();
    if (t.empty()) return std::nullopt;
    return t.extent();
}

double StepFunction::sup_abs() const noexcept {
    double s = 0.0;
    for (double v : values_) s = std::max(s, std::fabs(v));
    return s;
}

double StepFunction::l1_norm() const {
    CompensatedSum acc;
    for (double v : values_) acc.add(std::fabs(v));
    return acc.value() * cell_length();
}

double StepFunction::integral() const { return compensated_sum(values_) * cell_length(); }

std::vector<double> cells(const StepFunction& f, std::int64_t first, std::int64_t last) {
    std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(0, last - first)), 0.0);
    const std::int64_t a = std::max(first, f.cell_start());
    const std::int64_t b = std::min(last, f.cell_end());
    for (std::int64_t i = a; i < b; ++i) {
        out[static_cast<std::size_t>(i - first)] = f.at_cell(i);
    }
    return out;
}

std::pair<StepFunction, StepFunction> common_grid(const StepFunction& f, const StepFunction& g) {
    const int m = std::min(f.cell_scale(), g.cell_scale());
    StepFunction fr = f.refined(m);
    StepFunction gr = g.refined(m);
    std::int64_t first = 0;
    std::int64_t last = 0;
    if (fr.empty()) {
        first = gr.cell_start();
        last = gr.cell_end();
    } else if (gr.empty()) {
        first = fr.cell_start();
        last = fr.cell_end();
    } else {
        first = std::min(fr.cell_start(), gr.cell_start());
        last = std::max(fr.cell_end(), gr.cell_end());
    }
    return {StepFunction(m, first, cells(fr, first, last)),
            StepFunction(m, first, cells(gr, first, last))};
}

StepFunction combine(const StepFunction& f, double alpha, const StepFunction& g, double beta) {
    auto [fa, ga] = common_grid(f, g);
    std::vector<double> out(fa.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = alpha * fa.values()[i] + beta * ga.values()[i];
    }
    return {fa.cell_scale(), fa.cell_start(), std::move(out)};
}

StepFunction operator*(double alpha, const StepFunction& f) {
    std::vector<double> out(f.values().begin(), f.values().end());
    for (double& v : out) v *= alpha;
    return {f.cell_scale(), f.cell_start(), std::move(out)};
}

double max_difference(const StepFunction& f, const StepFunction& g) {
    auto [fa, ga] = common_grid(f, g);
    double d = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        d = std::max(d, std::fabs(fa.values()[i] - ga.values()[i]));
    }
    return d;
}

bool same_function(const StepFunction& f, const StepFunction& g) {
    auto [fa, ga] = common_grid(f, g);
    return std::equal(fa.values().begin(), fa.values().end(), ga.values().begin());
}

StepFunction haar(const DyadicInterval& I, int cell_scale) {
    if (cell_scale > I.n - 1) {
        throw ResolutionError("haar: cell scale " + std::to_string(cell_scale) +
                              " cannot resolve the halves of " + to_string(I));
    }
    const std::int64_t half = cells_per(I.n - 1, cell_scale);
    check_cell_count(2 * half);
    const double h = 1.0 / I.length();
    std::vector<double> v(static_cast<std::size_t>(2 * half), h);
    std::fill(v.begin() + half, v.end(), -h);
    return {cell_scale, I.k * 2 * half, std::move(v)};
}

StepFunction special_atom(int n, std::int64_t k, int cell_scale) {
    if (cell_scale > n) {
        throw ResolutionError("special_atom: cell scale " + std::to_string(cell_scale) +
                              " cannot resolve blocks of length 2^" + std::to_string(n));
    }
    const std::int64_t block = cells_per(n, cell_scale);
    check_cell_count(2 * block);
    const double h = pow2(-(n + 1));
    std::vector<double> v(static_cast<std::size_t>(2 * block), h);
    std::fill(v.begin() + block, v.end(), -h);
    return {cell_scale, (k - 1) * block, std::move(v)};
}

double integrate(const StepFunction& f, const GridInterval& J) {
    if (J.hi < J.lo) throw DomainError("integrate: reversed interval " + to_string(J));
    if (!J.aligned_to(f.cell_scale())) {
        throw AlignmentError("integrate: " + to_string(J) + " is not aligned to cells of length 2^" +
                             std::to_string(f.cell_scale()));
    }
    const auto first = static_cast<std::int64_t>(std::ldexp(J.lo, -f.cell_scale()));
    const auto last = static_cast<std::int64_t>(std::ldexp(J.hi, -f.cell_scale()));
    const std::int64_t a = std::max(first, f.cell_start());
    const std::int64_t b = std::min(last, f.cell_end());
    if (a >= b) return 0.0;
    const auto vals = f.values().subspan(static_cast<std::size_t>(a - f.cell_start()),
                                         static_cast<std::size_t>(b - a));
    return compensated_sum(vals) * f.cell_length();
}

double integrate_refining(const StepFunction& f, const GridInterval& J) {
    if (J.hi < J.lo) throw DomainError("integrate: reversed interval " + to_string(J));
    if (f.empty() || J.hi <= f.lo() || J.lo >= f.hi()) return 0.0;
    const double lo = std::max(J.lo, f.lo());
    const double hi = std::min(J.hi, f.hi());
    const std::int64_t a = f.cell_of(lo);
    const std::int64_t b = f.cell_of(std::nextafter(hi, lo));
    CompensatedSum acc;
    for (std::int64_t i = a; i <= b; ++i) {
        const double c0 = std::max(lo, f.cell_lo(i));
        const double c1 = std::min(hi, f.cell_lo(i + 1));
        if (c1 > c0) acc.add(f.at_cell(i) * (c1 - c0));
    }
    return acc.value();
}

StepFunction restrict(const StepFunction& f, Side keep) {
    std::vector<double> out(f.values().begin(), f.values().end());
    for (std::int64_t i = f.cell_start(); i < f.cell_end(); ++i) {
        const bool positive = i >= 0;
        if (positive != (keep == Side::positive)) out[static_cast<std::size_t>(i - f.cell_start())] = 0.0;
    }
    return {f.cell_scale(), f.cell_start(), std::move(out)};
}

namespace {

StepFunction reflect(const StepFunction& f, double sign) {
    for (std::int64_t i = f.cell_start(); i < std::min<std::int64_t>(0, f.cell_end()); ++i) {
        if (f.at_cell(i) != 0.0) {
            throw PreconditionError("reflect: function has mass on the negative axis");
        }
    }
    const std::int64_t e = std::max<std::int64_t>(0, f.cell_end());
    std::vector<double> out(static_cast<std::size_t>(2 * e));
    for (std::int64_t i = -e; i < e; ++i) {
        out[static_cast<std::size_t>(i + e)] = i >= 0 ? f.at_cell(i) : sign * f.at_cell(-i - 1);
    }
    return {f.cell_scale(), -e, std::move(out)};
}

}  // namespace

StepFunction reflect_even(const StepFunction& f) { return reflect(f, 1.0); }
StepFunction reflect_odd(const StepFunction& f) { return reflect(f, -1.0); }

}  // namespace dha

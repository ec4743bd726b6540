#include "dha/counterexample.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "dha/errors.hpp"

namespace dha {

double log_integral(double a, double b) {
    if (a < 0.0 || b < a) throw DomainError("log_integral: need 0 <= a <= b");
    if (b == a) return 0.0;
    if (a == 0.0) return b * (std::log(b) - 1.0);
    // b ln b - a ln a - (b - a), rearranged to avoid cancellation on short cells.
    return (b - a) * (std::log(b) - 1.0) + a * std::log1p((b - a) / a);
}

double log_moment_signed(const StepFunction& f) {
    CompensatedSum acc;
    for (std::int64_t i = std::max<std::int64_t>(0, f.cell_start()); i < f.cell_end(); ++i) {
        const double v = f.at_cell(i);
        if (v != 0.0) acc.add(v * log_integral(f.cell_lo(i), f.cell_lo(i + 1)));
    }
    return acc.value();
}

double spike_log_moment(int n) {
    return pow2(n) * log_integral(pow2(-n), pow2(1 - n));
}

Counterexample::Counterexample(int N) : N_(N), L_(0.0) {
    if (N < 1) throw DomainError("counterexample: N must be positive");
    if (N > 1000) throw RangeError("counterexample: N too large for double exponents");
    CompensatedSum acc;
    for (int n = 1; n <= N; ++n) acc.add(1.0 / (static_cast<double>(n) * n));
    L_ = acc.value();
}

double Counterexample::operator()(double x) const {
    const double ax = std::fabs(x);
    if (ax >= 1.0) return 0.0;
    double v = L_;
    if (ax >= pow2(-N_)) {
        int e = 0;
        std::frexp(ax, &e);  // 2^(e-1) <= ax < 2^e, so n = 1 - e
        const int n = 1 - e;
        v -= pow2(n) / (static_cast<double>(n) * n);
    }
    return x < 0.0 ? -v : v;
}

StepFunction Counterexample::function(ScaleWindow window) const {
    if (-N_ < window.min) {
        throw RangeError("counterexample: cell scale -" + std::to_string(N_) +
                         " is below the scale window");
    }
    const std::int64_t half = std::int64_t{1} << N_;
    if (2 * half > kMaxCells) throw RangeError("counterexample: grid too large");
    std::vector<double> v(static_cast<std::size_t>(2 * half));
    for (std::int64_t j = 0; j < half; ++j) {
        double val = L_;
        if (j > 0) {
            const int width = std::bit_width(static_cast<std::uint64_t>(j));  // 2^(w-1) <= j < 2^w
            const int n = N_ - (width - 1);
            val -= pow2(n) / (static_cast<double>(n) * n);
        }
        v[static_cast<std::size_t>(half + j)] = val;
        v[static_cast<std::size_t>(half - 1 - j)] = -val;
    }
    return {-N_, -half, std::move(v)};
}

AtomicDecomposition Counterexample::decomposition() const {
    AtomicDecomposition d;
    d.flavor = Flavor::general;
    d.terms.push_back(Term{-2.0 * L_, Atom{b_function(-1), {-1.0, 1.0}}});
    for (int n = 1; n <= N_; ++n) {
        const double h = pow2(n - 2);
        StepFunction a(-n, -2, {-h, 0.0, 0.0, h});
        d.terms.push_back(Term{-4.0 / (static_cast<double>(n) * n),
                               Atom{std::move(a), {-pow2(1 - n), pow2(1 - n)}}});
    }
    return d;
}

std::vector<double> Counterexample::piece_midpoints() const {
    std::vector<double> pts;
    pts.push_back(pow2(-N_ - 1));
    for (int n = 1; n <= N_; ++n) pts.push_back(0.75 * pow2(1 - n));
    pts.push_back(1.5);
    const std::size_t half = pts.size();
    for (std::size_t i = 0; i < half; ++i) pts.push_back(-pts[i]);
    return pts;
}

double Counterexample::decomposition_error() const {
    const AtomicDecomposition d = decomposition();
    double err = 0.0;
    for (double x : piece_midpoints()) {
        CompensatedSum acc;
        for (const auto& t : d.terms) acc.add(t.lambda * t.atom.shape(x));
        err = std::max(err, std::fabs(acc.value() - (*this)(x)));
    }
    return err;
}

double Counterexample::log_moment_signed() const {
    CompensatedSum acc;
    acc.add(L_ * log_integral(0.0, pow2(-N_)));
    for (int n = 1; n <= N_; ++n) {
        const double v = L_ - pow2(n) / (static_cast<double>(n) * n);
        acc.add(v * log_integral(pow2(-n), pow2(1 - n)));
    }
    return acc.value();
}

double Counterexample::log_moment() const { return std::fabs(log_moment_signed()); }

double Counterexample::spike_moment() const {
    CompensatedSum acc;
    for (int n = 1; n <= N_; ++n) acc.add(-spike_log_moment(n) / (static_cast<double>(n) * n));
    return acc.value();
}

StepFunction counterexample(int N, ScaleWindow window) { return Counterexample(N).function(window); }

}  // namespace dha

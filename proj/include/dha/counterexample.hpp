#pragma once

#include <vector>

#include "dha/atoms.hpp"

namespace dha {

/// Integral of ln x over [a, b) with 0 <= a < b, evaluated stably.
double log_integral(double a, double b);

/// integral_0^inf f(x) ln x dx for a step function, exact per cell.
double log_moment_signed(const StepFunction& f);

/// integral of 2^n chi_[2^-n, 2^(1-n)) times ln x.
double spike_log_moment(int n);

/// Odd extension of L_N chi_[0,1) - sum_{n<=N} n^-2 2^n chi_[2^-n, 2^(1-n)),
/// with L_N = sum_{n<=N} n^-2.
///
/// The function has zero integral on each half-line and an atomic
/// decomposition of cost 6 L_N, while its logarithmic moment diverges.
/// It is piecewise constant on the geometric pieces [2^-n, 2^(1-n)), so
/// moments and decompositions are available for any N without building the
/// uniform grid of scale -N.
class Counterexample {
public:
    explicit Counterexample(int N);

    int N() const noexcept { return N_; }
    double partial_constant() const noexcept { return L_; }

    /// Value at x (exact).
    double operator()(double x) const;

    /// Uniform-grid materialization at cell scale -N. Throws RangeError when
    /// -N is below the window.
    StepFunction function(ScaleWindow window = {}) const;

    /// Terms (-2 L_N, b) and (-4/n^2, a_n), where
    /// a_n = 2^(n-2) [chi_[2^-n, 2^(1-n)) - chi_[-2^(1-n), -2^-n)].
    AtomicDecomposition decomposition() const;

    /// Midpoints of every piece on which the function is constant,
    /// including one point beyond each end of the support.
    std::vector<double> piece_midpoints() const;

    /// Largest pointwise gap between the decomposition and the function
    /// over all pieces.
    double decomposition_error() const;

    /// integral_0^inf f ln x, summed exactly over the pieces.
    double log_moment_signed() const;
    double log_moment() const;

    /// -sum n^-2 integral f_n ln x: the moment of the spike part alone.
    double spike_moment() const;

private:
    int N_;
    double L_;
};

/// Uniform-grid counterexample; shorthand for Counterexample(N).function().
StepFunction counterexample(int N, ScaleWindow window = {});

}  // namespace dha

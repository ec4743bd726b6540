#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dha/random.hpp"
#include "dha/step_function.hpp"

namespace dha {

/// Midpoint samples of a function on [lo, lo + step * values.size()).
struct SampledFunction {
    double lo = 0.0;
    double step = 1.0;
    int refine = 1;  ///< samples per cell of the source grid
    std::vector<double> values;

    double hi() const noexcept { return lo + step * static_cast<double>(values.size()); }
    double midpoint(std::size_t i) const noexcept { return lo + (static_cast<double>(i) + 0.5) * step; }
    /// Sample of the cell containing x; zero outside the sampled range.
    double value_at(double x) const;
};

/// Samples a step function at its cell midpoints, `refine` per cell.
SampledFunction to_sampled(const StepFunction& f, int refine = 1);

/// tau_eps f(x) = |x|^(eps-1) integral_{-x}^{x} f, sampled at R points per
/// cell of f on the symmetric hull [-e, e) of the support. The inner integral
/// is exact. For x < 0 the oriented integral is used, so tau_eps f is odd.
SampledFunction tau(const StepFunction& f, double eps, int refine = 4);

/// L^p norm; p = infinity gives the sup. Exact for step functions.
double lp_norm(const StepFunction& f, double p);
/// Composite midpoint rule over the samples.
double lp_norm(const SampledFunction& g, double p);

/// sup_t t |{|g| > t}|^(1/p), taken over the sample values.
double weak_lp(const StepFunction& f, double p);
double weak_lp(const SampledFunction& g, double p);

struct QuadratureReport {
    double value = 0.0;   ///< estimate at 2R
    double coarse = 0.0;  ///< estimate at R
    double rel_diff = 0.0;
    bool converged = false;  ///< rel_diff <= 1%
};

/// ||tau_eps f||_p at refinements R and 2R.
QuadratureReport tau_lp_norm(const StepFunction& f, double eps, double p, int refine = 4);

struct MaximalResult {
    StepFunction values;      ///< on [-2^L, 2^L) at the cell scale of f
    double tail_bound = 0.0;  ///< bound on the operator outside the window
};

/// Dyadic fractional maximal function sup_{x in I} |I|^(eps-1) |integral_I f|
/// on the window [-2^L, 2^L). Without truncation every dyadic scale is
/// covered: above scale L the integrals repeat and the factor shrinks, so
/// values inside the window are exact and `tail_bound` = 2^(L(eps-1)) ||f||_1
/// bounds the outside. With truncation N only 2^-N <= |I| <= 2^N enter.
MaximalResult maximal_dyadic(const StepFunction& f, double eps, int L, std::optional<int> truncate = {});

using SampledOperator = std::function<SampledFunction(const StepFunction&)>;

struct OperatorPart {
    std::string name;
    std::vector<StepFunction> atoms;
};

struct PartReport {
    std::string name;
    double sup = 0.0;
    std::size_t argmax = 0;
    std::size_t count = 0;
};

struct OpNormReport {
    std::vector<PartReport> parts;
    double overall = 0.0;
};

/// Empirical sup of ||T a||_p over each part; overall is the max over parts.
/// For linear T (the default) additivity is spot-checked on random pairs and
/// a ContractError is thrown on failure.
OpNormReport op_norm_estimate(const SampledOperator& T, const std::vector<OperatorPart>& parts, double p,
                              bool linear = true, std::uint64_t seed = 1);

}  // namespace dha

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dha/step_function.hpp"

namespace dha {

enum class FamilyTag { all, dyadic, two_sided, shifted };

std::string to_string(FamilyTag t);
FamilyTag family_from_string(const std::string& s);

/// Intervals over which a BMO-type supremum is taken.
///
/// Every member lies inside `window`; endpoints sit on the grid of the
/// function being measured. The scale window restricts the dyadic and
/// shifted families (J_{n,k} = [(k-1)2^n, (k+1)2^n)); the all and two-sided
/// families are limited by the window alone.
struct IntervalFamily {
    FamilyTag tag = FamilyTag::all;
    int n_lo = -10;
    int n_hi = 10;
    /// Empty means: double the smallest [-2^L, 2^L) covering the support.
    std::optional<GridInterval> window;
};

struct NormReport {
    double value = 0.0;
    GridInterval witness;
    FamilyTag family = FamilyTag::all;
    /// Index (n, k) of the witness for the shifted family and A functionals.
    int n = 0;
    std::int64_t k = 0;
};

/// [-2^(L+1), 2^(L+1)) for the smallest L with supp(f) in [-2^L, 2^L).
GridInterval default_window(const StepFunction& f);

/// (1/|J|) integral_J |f - f_J|, summed over the cells of f inside J.
double mean_oscillation(const StepFunction& f, const GridInterval& J);

/// Supremum of the mean oscillation over the family. Ties go to the shorter
/// interval, then to the smaller left endpoint.
NormReport bmo_norm(const StepFunction& f, const IntervalFamily& family = {});

/// sup_{n,k} 2^-(n+1) |int_{[(k-1)2^n, k 2^n)} f - int_{[k 2^n, (k+1)2^n)} f|
/// over the shifted intervals of the family's window.
NormReport a_functional(const StepFunction& f, const IntervalFamily& family = {});

/// max(dyadic norm, A).
double lambda_norm(const StepFunction& f, const IntervalFamily& family = {});

/// The k = 0 slice of A.
NormReport a0_functional(const StepFunction& f, const IntervalFamily& family = {});

/// |integral f b|.
double ab_functional(const StepFunction& f);

struct ExtensionReport {
    double even_norm = 0.0;        ///< all-family norm of the even extension
    double two_sided_norm = 0.0;   ///< two-sided norm of f
    double ratio = 1.0;            ///< even_norm / two_sided_norm (1 when both vanish)
    bool ratio_flag = false;       ///< ratio outside [1, 1 + 1e-9]
    double odd_norm = 0.0;         ///< all-family norm of the odd extension
    double g_value = 0.0;          ///< sup_n 2^-n |int_[0,2^n) f|
    int g_scale = 0;               ///< n attaining g_value
    double g_top = 0.0;            ///< 2^-n |int_[0,2^n) f| at the largest n in the window
    double odd_ratio = 0.0;        ///< odd_norm / (two_sided_norm + g_value)
    bool odd_unbounded = false;    ///< G still increasing at the top scale
};

/// Even and odd extension criteria for f supported in [0, inf). The default
/// window is [-e, e) with e the right end of the extent of f, so the
/// extensions are not clipped inside the window.
ExtensionReport extension_criteria(const StepFunction& f, std::optional<GridInterval> window = {});

/// Cell averages of ln|x| on [-2^L, 2^L) at the given cell scale.
StepFunction log_abs_function(int cell_scale, int L);

/// Two-sided BMO norm of log_abs_function(cell_scale, L).
double kappa_ln(int cell_scale = -6, int L = 4);

}  // namespace dha

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dha/dyadic.hpp"
#include "dha/step_function.hpp"

namespace dha {

/// An L-infinity atom: supp(shape) in `defining`, |shape| <= 1/|defining|,
/// zero integral.
struct Atom {
    StepFunction shape;
    GridInterval defining;
};

struct AtomReport {
    bool ok = false;
    double max_violation = 0.0;
    double support_violation = 0.0;       ///< sup |shape| outside the defining interval
    double size_violation = 0.0;          ///< excess of sup |shape| over 1/|I|
    double cancellation_violation = 0.0;  ///< |integral|
};

AtomReport validate_atom(const StepFunction& shape, const GridInterval& defining);
inline AtomReport validate_atom(const Atom& a) { return validate_atom(a.shape, a.defining); }

enum class Flavor { general, dyadic, two_sided, special, special_origin };

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& s);

struct Term {
    double lambda = 0.0;
    Atom atom;
};

struct AtomicDecomposition {
    Flavor flavor = Flavor::general;
    std::vector<Term> terms;

    /// Sum of |lambda_j|; an upper bound for the atomic norm of the flavor.
    double cost() const;
    /// Sum of lambda_j a_j on the finest grid among the atoms.
    StepFunction reconstruct() const;
    /// Every defining interval satisfies the flavor's restriction.
    bool flavor_consistent() const;
};

/// Result of splitting an atom into two dyadic atoms and a special atom:
/// a = c1 a_L + c2 a_R + c3 b_{n,k}.
struct SplitResult {
    double c1 = 4.0;
    double c2 = 4.0;
    double c3 = 0.0;
    Atom a_left;
    Atom a_right;
    int n = 0;
    std::int64_t k = 0;

    StepFunction special() const;
    StepFunction reconstruct() const;
};

/// Splits an atom; 2^(n-1) <= |I| < 2^n and k 2^n is the multiple of 2^n
/// interior to I, or k = floor(inf I / 2^n) when there is none.
SplitResult split_atom(const Atom& a, ScaleWindow window = {});

/// Coefficients c_I of f = sum_I c_I H_I + residual over dyadic I inside
/// [-2^L, 0) or [0, 2^L).
struct HaarExpansion {
    std::map<DyadicInterval, double> coefficients;
    StepFunction residual;  ///< constant on [-2^L, 0) and on [0, 2^L)
    int max_scale = 0;
    int cell_scale = 0;

    StepFunction reconstruct() const;
    double cost() const;
};

/// Smallest L >= min_scale with supp(f) in [-2^L, 2^L).
int covering_scale(const StepFunction& f, int min_scale = -60);

HaarExpansion haar_expand(const StepFunction& f, int max_scale);

/// Integral of f over [0, inf).
double positive_half_integral(const StepFunction& f);

/// Feasible atomic decomposition of the given flavor (general, dyadic or
/// two_sided). Throws InfeasibleError carrying the half-line integral when
/// a dyadic or two-sided decomposition does not exist.
AtomicDecomposition decompose(const StepFunction& f, Flavor flavor);

/// Upper bound on the atomic norm: the cheapest of the Haar route, the
/// b-corrected Haar route, a single-atom bound, and any validated
/// `candidates` supplied by the caller.
double h1_upper(const StepFunction& f, Flavor flavor,
                std::span<const AtomicDecomposition> candidates = {});

struct DistanceResult {
    double obstruction = 0.0;          ///< |integral_0^inf f|
    double half_line_integral = 0.0;   ///< signed integral_0^inf f
    StepFunction corrected;            ///< f + 2 (integral_0^inf f) b
    double correction_cost = 0.0;      ///< h1_upper(f - corrected)
};

DistanceResult distance_to_HA(const StepFunction& f);

/// 1/4 [a(x) + a(-x)] chi_[0,inf) with the folded defining interval.
Atom symmetrize_atom(const Atom& a);

/// Two-sided decomposition of a function g vanishing on (-inf, 0) from a
/// decomposition `dec` whose reconstruction equals g. Degenerate (zero)
/// atoms are dropped.
AtomicDecomposition symmetrize(const StepFunction& g, const AtomicDecomposition& dec);

}  // namespace dha

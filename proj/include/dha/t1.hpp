#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dha/bmo.hpp"
#include "dha/step_function.hpp"

namespace dha {

/// Finite-rank surrogate of a kernel operator on [-2^L, 2^L) at cell scale m.
///
/// Entries are K(x_i, y_j) at cell midpoints, with the diagonal set to zero
/// (principal-value skip). `tail(d)` bounds integral_d^inf |K(x, x +- t)| dt
/// and is used for the truncation band of T(1); infinity when unknown.
class KernelOperator {
public:
    using Kernel = std::function<double(double, double)>;
    using Tail = std::function<double(double)>;

    KernelOperator(std::string name, int cell_scale, int L, std::vector<double> entries, Tail tail = {});
    static KernelOperator from_kernel(std::string name, int cell_scale, int L, const Kernel& k, Tail tail = {});

    const std::string& name() const noexcept { return name_; }
    int cell_scale() const noexcept { return m_; }
    int L() const noexcept { return L_; }
    std::size_t size() const noexcept { return n_; }
    double cell_length() const noexcept { return pow2(m_); }
    std::int64_t first_cell() const noexcept { return -(std::int64_t{1} << (L_ - m_)); }
    GridInterval window() const noexcept { return {-pow2(L_), pow2(L_)}; }
    double midpoint(std::size_t i) const noexcept;

    double entry(std::size_t i, std::size_t j) const noexcept { return k_[i * n_ + j]; }
    /// Bound on the kernel mass beyond distance d; infinity when undeclared.
    double tail(double d) const;

    KernelOperator transpose() const;

    /// (Tf)_i = 2^m sum_{j != i} K_ij f_j on the window grid.
    StepFunction apply(const StepFunction& f) const;
    StepFunction apply_transpose(const StepFunction& f) const;

    /// <T chi_J, chi_J> for a window-grid interval J.
    double quadratic_form(const GridInterval& J) const;

    /// Dense window cells of f; throws on grid mismatch or support outside.
    std::vector<double> window_values(const StepFunction& f) const;
    StepFunction from_window(std::vector<double> v) const;

private:
    std::string name_;
    int m_;
    int L_;
    std::size_t n_;
    std::vector<double> k_;
    Tail tail_;
};

/// Catalog: hilbert, gauss, gauss-even, blockdiag, zero. `seed` drives the
/// block-diagonal entries.
KernelOperator catalog_kernel(const std::string& name, int cell_scale, int L, std::uint64_t seed = 1);

/// Block-diagonal kernel whose blocks are the dyadic shells [2^j, 2^(j+1))
/// (and mirror images), so T maps functions on [0, 2^n) or [-2^n, 0) into
/// the same interval.
KernelOperator block_diagonal_kernel(int cell_scale, int L, std::uint64_t seed);

double inner(const StepFunction& f, const StepFunction& g);

/// sup over the family of |<T chi_I, chi_I>| / |I|, computed from the
/// symmetric part of the matrix so antisymmetric kernels give exactly 0.
NormReport wbp(const KernelOperator& T, FamilyTag family = FamilyTag::all);

struct BracketCheck {
    int n = 0;
    double lhs = 0.0;  ///< <T b_{n,0}, 1>
    double rhs = 0.0;  ///< 2^-(n+1) [<T chi_-, chi_-> - <T chi_+, chi_+>]
    double rel_err = 0.0;
    bool support_preserving = false;
};

BracketCheck bracket_identity(const KernelOperator& T, int n);

struct T1Report {
    StepFunction t1;        ///< row sums over the window
    StepFunction t1_star;   ///< column sums
    double truncation_band = 0.0;  ///< bound on the omitted mass outside the window
    double c_1d = 0.0, c_2d = 0.0, c_1s = 0.0, c_2s = 0.0;
    double lambda_t1 = 0.0, lambda_t1_star = 0.0;
    double bmo_t1 = 0.0, bmo_t1_star = 0.0;  ///< all-family norms
    bool propagation_ok = false;  ///< lambda norms <= c_1d + c_2d
    double wbp_constant = 0.0;
    bool t1_even = false;
    ExtensionReport even_route;  ///< filled when T(1) is even
    double matrix_norm = 0.0;    ///< L2 operator norm of the surrogate
};

T1Report bmo_conditions(const KernelOperator& T);

/// Largest singular value of the surrogate as an operator on L^2 of the grid.
double operator_two_norm(const KernelOperator& T, int iterations = 200);

}  // namespace dha

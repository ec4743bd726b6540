#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dha/step_function.hpp"

namespace dha {

/// Finitely supported function constant on the squares of side 2^m,
/// values[ix * ny + iy] on [(kx0+ix) 2^m, ...) x [(ky0+iy) 2^m, ...).
class StepFunction2D {
public:
    StepFunction2D() = default;
    StepFunction2D(int cell_scale, std::int64_t kx0, std::int64_t ky0, std::size_t nx, std::size_t ny,
                   std::vector<double> values);

    /// Tensor product f(x) g(y) on the finer of the two grids.
    static StepFunction2D tensor(const StepFunction& f, const StepFunction& g);

    int cell_scale() const noexcept { return m_; }
    std::int64_t kx0() const noexcept { return kx0_; }
    std::int64_t ky0() const noexcept { return ky0_; }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    const std::vector<double>& values() const noexcept { return v_; }
    double cell_length() const noexcept { return pow2(m_); }
    double cell_area() const noexcept { return pow2(2 * m_); }

    /// Value of the cell with global indices (i, j); zero outside.
    double at(std::int64_t i, std::int64_t j) const noexcept;
    double operator()(double x, double y) const noexcept;

    StepFunction2D refined(int new_scale) const;
    double integral() const;

    bool operator==(const StepFunction2D&) const = default;

private:
    int m_ = 0;
    std::int64_t kx0_ = 0, ky0_ = 0;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> v_;
};

StepFunction2D combine(const StepFunction2D& f, double alpha, const StepFunction2D& g, double beta);
double inner(const StepFunction2D& f, const StepFunction2D& g);
double max_difference(const StepFunction2D& f, const StepFunction2D& g);

/// Psi_{j,n,k,l}(x, y) = 2^n Psi_j(2^n x - k, 2^n y - l) with
/// Psi_1 = H(x) chi(y), Psi_2 = chi(x) H(y), Psi_3 = H(x) H(y) on [0,1)^2.
StepFunction2D psi(int j, int n, std::int64_t k, std::int64_t l, int cell_scale);

/// Integrals over Q1 (x>0, y>0), Q2 (x<0, y>0), Q3 (x<0, y<0), Q4 (x>0, y<0).
std::array<double, 4> quadrant_integrals(const StepFunction2D& f);

/// b_1 = b(x) chi_[0,1)(y), b_2 = chi_[0,1)(x) b(y), b_3 = b(x) chi_[-1,0)(y).
StepFunction2D special_b(int which, int cell_scale = -1);

enum class Pattern { vert, horiz, checker };

std::string to_string(Pattern p);
Pattern pattern_from_string(const std::string& s);

/// Signs (k1, k2, k3, k4) on Q(k,l), Q(k-1,l), Q(k,l-1), Q(k-1,l-1).
std::array<int, 4> pattern_signs(Pattern p);

/// 2^-(n+m+2) [k1 chi_Q(k,l) + k2 chi_Q(k-1,l) + k3 chi_Q(k,l-1) + k4 chi_Q(k-1,l-1)]
/// with Q(k,l) = [k 2^n, (k+1) 2^n) x [l 2^m, (l+1) 2^m).
StepFunction2D special2d(Pattern p, int n, std::int64_t k, int m, std::int64_t l, int cell_scale);

struct Pairing2DReport {
    double value = 0.0;  ///< sup |integral phi b_{n,k,m,l}|
    Pattern pattern = Pattern::vert;
    int n = 0, m = 0;
    std::int64_t k = 0, l = 0;
    double square_norm = 0.0;  ///< mean oscillation sup over dyadic squares
    int square_scale = 0;
    std::int64_t square_k = 0, square_l = 0;
    double lambda = 0.0;  ///< max(value, square_norm)
};

/// Pairing functional and dyadic-square BMO norm over the window [-2^L, 2^L)^2.
Pairing2DReport bmo2d_pairing(const StepFunction2D& phi, int L);

}  // namespace dha

#include "dha/t1.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "dha/errors.hpp"
#include "dha/random.hpp"

namespace dha {

namespace {

constexpr std::size_t kMaxMatrix = 2048;

std::size_t grid_size(int m, int L) {
    if (L < m) throw DomainError("kernel window smaller than one cell");
    if (L + 1 - m > 11) throw RangeError("kernel grid exceeds " + std::to_string(kMaxMatrix) + " cells");
    return std::size_t{1} << (L + 1 - m);
}

double infinite_tail(double) { return std::numeric_limits<double>::infinity(); }

}  // namespace

KernelOperator::KernelOperator(std::string name, int cell_scale, int L, std::vector<double> entries, Tail tail)
    : name_(std::move(name)), m_(cell_scale), L_(L), n_(grid_size(cell_scale, L)), k_(std::move(entries)),
      tail_(tail ? std::move(tail) : Tail(infinite_tail)) {
    if (k_.size() != n_ * n_)
        throw PreconditionError("kernel matrix must be " + std::to_string(n_) + " x " + std::to_string(n_));
    for (std::size_t i = 0; i < n_; ++i) k_[i * n_ + i] = 0.0;
}

KernelOperator KernelOperator::from_kernel(std::string name, int cell_scale, int L, const Kernel& k, Tail tail) {
    const std::size_t n = grid_size(cell_scale, L);
    const double h = pow2(cell_scale);
    const double lo = -pow2(L);
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (static_cast<double>(i) + 0.5) * h;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            e[i * n + j] = k(x, lo + (static_cast<double>(j) + 0.5) * h);
        }
    }
    return {std::move(name), cell_scale, L, std::move(e), std::move(tail)};
}

double KernelOperator::midpoint(std::size_t i) const noexcept {
    return -pow2(L_) + (static_cast<double>(i) + 0.5) * cell_length();
}

double KernelOperator::tail(double d) const { return tail_(d); }

KernelOperator KernelOperator::transpose() const {
    std::vector<double> t(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t[j * n_ + i] = k_[i * n_ + j];
    return {name_ + "*", m_, L_, std::move(t), tail_};
}

std::vector<double> KernelOperator::window_values(const StepFunction& f) const {
    if (f.cell_scale() < m_) throw AlignmentError("function grid is finer than the kernel grid");
    const StepFunction g = f.cell_scale() > m_ ? f.refined(m_) : f;
    const StepFunction t = g.trimmed();
    const std::int64_t first = first_cell();
    const std::int64_t last = first + static_cast<std::int64_t>(n_);
    if (!t.empty() && (t.cell_start() < first || t.cell_end() > last))
        throw PreconditionError("function support leaves the kernel window");
    return cells(g, first, last);
}

StepFunction KernelOperator::from_window(std::vector<double> v) const { return {m_, first_cell(), std::move(v)}; }

StepFunction KernelOperator::apply(const StepFunction& f) const {
    const std::vector<double> v = window_values(f);
    const double h = cell_length();
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        const double* row = &k_[i * n_];
        for (std::size_t j = 0; j < n_; ++j) s += row[j] * v[j];
        out[i] = h * s;
    }
    return from_window(std::move(out));
}

StepFunction KernelOperator::apply_transpose(const StepFunction& f) const {
    const std::vector<double> v = window_values(f);
    const double h = cell_length();
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += k_[j * n_ + i] * v[j];
        out[i] = h * s;
    }
    return from_window(std::move(out));
}

double KernelOperator::quadratic_form(const GridInterval& J) const {
    if (!J.aligned_to(m_) || !window().contains(J)) throw AlignmentError("interval is not on the kernel grid");
    const auto a = static_cast<std::size_t>(std::ldexp(J.lo, -m_) - static_cast<double>(first_cell()));
    const auto b = static_cast<std::size_t>(std::ldexp(J.hi, -m_) - static_cast<double>(first_cell()));
    CompensatedSum acc;
    for (std::size_t i = a; i < b; ++i)
        for (std::size_t j = a; j < b; ++j) acc.add(k_[i * n_ + j]);
    const double h = cell_length();
    return h * h * acc.value();
}

KernelOperator block_diagonal_kernel(int cell_scale, int L, std::uint64_t seed) {
    const std::size_t n = grid_size(cell_scale, L);
    const auto first = -static_cast<std::int64_t>(n / 2);
    auto shell = [](std::int64_t i) {
        return i >= 0 ? std::bit_width(static_cast<std::uint64_t>(i))
                      : -1 - std::bit_width(static_cast<std::uint64_t>(-i - 1));
    };
    Rng rng(seed);
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (shell(first + static_cast<std::int64_t>(i)) == shell(first + static_cast<std::int64_t>(j)))
                e[i * n + j] = quantize(rng.uniform(-1.0, 1.0));
    return {"blockdiag", cell_scale, L, std::move(e), [](double) { return 0.0; }};
}

KernelOperator catalog_kernel(const std::string& name, int cell_scale, int L, std::uint64_t seed) {
    const double half_sqrt_pi = 0.5 * std::sqrt(std::numbers::pi);
    if (name == "hilbert")
        return KernelOperator::from_kernel(name, cell_scale, L, [](double x, double y) { return 1.0 / (x - y); });
    if (name == "gauss")
        return KernelOperator::from_kernel(
            name, cell_scale, L, [](double x, double y) { return std::exp(-(x - y) * (x - y)); },
            [=](double d) { return half_sqrt_pi * std::erfc(d); });
    if (name == "gauss-even")
        return KernelOperator::from_kernel(
            name, cell_scale, L,
            [](double x, double y) { return std::exp(-(x - y) * (x - y)) + std::exp(-(x + y) * (x + y)); },
            [=](double d) { return 2.0 * half_sqrt_pi * std::erfc(d); });
    if (name == "blockdiag") return block_diagonal_kernel(cell_scale, L, seed);
    if (name == "zero")
        return KernelOperator::from_kernel(name, cell_scale, L, [](double, double) { return 0.0; },
                                           [](double) { return 0.0; });
    throw ParseError("unknown kernel '" + name + "'");
}

double inner(const StepFunction& f, const StepFunction& g) {
    const auto [a, b] = common_grid(f, g);
    CompensatedSum acc;
    const std::int64_t lo = std::max(a.cell_start(), b.cell_start());
    const std::int64_t hi = std::min(a.cell_end(), b.cell_end());
    for (std::int64_t i = lo; i < hi; ++i) acc.add(a.at_cell(i) * b.at_cell(i));
    return acc.value() * a.cell_length();
}

NormReport wbp(const KernelOperator& T, FamilyTag family) {
    const std::size_t n = T.size();
    const double h = T.cell_length();
    // Prefix sums of the symmetric part: the square sums of K and of its
    // symmetric part agree, and antisymmetric entries cancel exactly.
    std::vector<double> P((n + 1) * (n + 1), 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return P[i * (n + 1) + j]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double s = 0.5 * (T.entry(i, j) + T.entry(j, i));
            at(i + 1, j + 1) = s + at(i, j + 1) + at(i + 1, j) - at(i, j);
        }
    auto ratio = [&](std::size_t a, std::size_t b) {
        const double block = at(b, b) - at(a, b) - at(b, a) + at(a, a);
        return std::fabs(h * h * block) / (h * static_cast<double>(b - a));
    };

    NormReport best;
    best.family = family;
    bool any = false;
    auto offer = [&](std::size_t a, std::size_t b) {
        const double v = ratio(a, b);
        const GridInterval J{T.midpoint(a) - 0.5 * h, T.midpoint(b - 1) + 0.5 * h};
        if (!any || v > best.value ||
            (v == best.value && (J.length() < best.witness.length() ||
                                 (J.length() == best.witness.length() && J.lo < best.witness.lo)))) {
            best.value = v;
            best.witness = J;
            any = true;
        }
    };
    const std::size_t origin = n / 2;
    switch (family) {
        case FamilyTag::all:
        case FamilyTag::two_sided:
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b <= n; ++b) {
                    if (family == FamilyTag::two_sided && a < origin && b > origin) continue;
                    offer(a, b);
                }
            break;
        case FamilyTag::dyadic:
            for (std::size_t B = 1; B <= n / 2; B *= 2)
                for (std::size_t a = 0; a + B <= n; a += B) offer(a, a + B);
            break;
        case FamilyTag::shifted:
            for (std::size_t B = 1; 2 * B <= n / 2; B *= 2)
                for (std::size_t a = 0; a + 2 * B <= n; a += B) offer(a, a + 2 * B);
            break;
    }
    return best;
}

BracketCheck bracket_identity(const KernelOperator& T, int n) {
    if (n < T.cell_scale() || n > T.L()) throw RangeError("bracket_identity: scale outside the kernel window");
    BracketCheck r;
    r.n = n;
    const StepFunction b = special_atom(n, 0, T.cell_scale());
    const StepFunction one = StepFunction::indicator(T.window(), T.cell_scale());
    r.lhs = inner(T.apply(b), one);
    const GridInterval neg{-pow2(n), 0.0}, pos{0.0, pow2(n)};
    r.rhs = pow2(-(n + 1)) * (T.quadratic_form(neg) - T.quadratic_form(pos));
    const double scale = std::max(std::fabs(r.lhs), std::fabs(r.rhs));
    r.rel_err = scale > 0.0 ? std::fabs(r.lhs - r.rhs) / scale : 0.0;

    auto stays_inside = [&](const GridInterval& J) {
        const StepFunction out = T.apply(StepFunction::indicator(J, T.cell_scale()));
        for (std::int64_t i = out.cell_start(); i < out.cell_end(); ++i)
            if (out.at_cell(i) != 0.0 && !J.contains(out.cell_lo(i))) return false;
        return true;
    };
    r.support_preserving = stays_inside(neg) && stays_inside(pos);
    return r;
}

double operator_two_norm(const KernelOperator& T, int iterations) {
    const std::size_t n = T.size();
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
    double sigma = 0.0;
    for (int it = 0; it < iterations; ++it) {
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (double& x : v) x /= norm;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += T.entry(i, j) * v[j];
            w[i] = s;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += T.entry(i, j) * w[i];
            v[j] = s;
        }
        double vv = 0.0;
        for (double x : v) vv += x * x;
        sigma = std::sqrt(std::sqrt(vv));  // ||K^T K u|| -> sigma^2
    }
    return T.cell_length() * sigma;
}

namespace {

// sup over shifted (n, k) of the sum of |<b_{n,k}, g>| for the given functions.
double pairing_sup(const KernelOperator& T, const std::vector<const StepFunction*>& gs, bool origin_only) {
    const std::size_t n = T.size();
    const double h = T.cell_length();
    std::vector<std::vector<double>> prefix;
    for (const StepFunction* g : gs) {
        const std::vector<double> v = T.window_values(*g);
        std::vector<double> p(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) p[i + 1] = p[i] + v[i];
        prefix.push_back(std::move(p));
    }
    const std::size_t origin = n / 2;
    double best = 0.0;
    for (std::size_t B = 1; 2 * B <= n; B *= 2) {
        for (std::size_t mid = B; mid + B <= n; mid += B) {
            if (origin_only && mid != origin) continue;
            double s = 0.0;
            for (const auto& p : prefix) {
                const double left = p[mid] - p[mid - B];
                const double right = p[mid + B] - p[mid];
                s += std::fabs(left - right) * h / (2.0 * h * static_cast<double>(B));
            }
            best = std::max(best, s);
        }
    }
    return best;
}

}  // namespace

T1Report bmo_conditions(const KernelOperator& T) {
    T1Report r;
    const std::size_t n = T.size();
    const double h = T.cell_length();
    std::vector<double> rows(n, 0.0), cols(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            rows[i] += T.entry(i, j);
            cols[j] += T.entry(i, j);
        }
    for (std::size_t i = 0; i < n; ++i) {
        rows[i] *= h;
        cols[i] *= h;
        const double x = T.midpoint(i);
        r.truncation_band = std::max(r.truncation_band, T.tail(T.window().hi - x) + T.tail(x - T.window().lo));
    }
    r.t1 = T.from_window(std::move(rows));
    r.t1_star = T.from_window(std::move(cols));

    const GridInterval w = T.window();
    const IntervalFamily dy{FamilyTag::dyadic, T.cell_scale(), T.L(), w};
    const IntervalFamily ts{FamilyTag::two_sided, T.cell_scale(), T.L(), w};
    const IntervalFamily all{FamilyTag::all, T.cell_scale(), T.L(), w};
    r.c_1d = bmo_norm(r.t1, dy).value + bmo_norm(r.t1_star, dy).value;
    r.c_1s = bmo_norm(r.t1, ts).value + bmo_norm(r.t1_star, ts).value;
    r.c_2d = pairing_sup(T, {&r.t1, &r.t1_star}, false);
    r.c_2s = pairing_sup(T, {&r.t1, &r.t1_star}, true);
    r.lambda_t1 = lambda_norm(r.t1, all);
    r.lambda_t1_star = lambda_norm(r.t1_star, all);
    r.bmo_t1 = bmo_norm(r.t1, all).value;
    r.bmo_t1_star = bmo_norm(r.t1_star, all).value;
    const double slack = tolerance() * (1.0 + r.c_1d + r.c_2d);
    r.propagation_ok = r.lambda_t1 <= r.c_1d + r.c_2d + slack && r.lambda_t1_star <= r.c_1d + r.c_2d + slack;
    r.wbp_constant = wbp(T).value;

    double scale = 0.0, asym = 0.0;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n / 2); ++i) {
        const double a = r.t1.at_cell(i), b = r.t1.at_cell(-i - 1);
        scale = std::max({scale, std::fabs(a), std::fabs(b)});
        asym = std::max(asym, std::fabs(a - b));
    }
    r.t1_even = asym <= 1e-12 * (1.0 + scale);
    if (r.t1_even) r.even_route = extension_criteria(restrict(r.t1, Side::positive), w);
    r.matrix_norm = operator_two_norm(T);
    return r;
}

}  // namespace dha

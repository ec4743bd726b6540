#include "dha/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dha/atoms.hpp"
#include "dha/counterexample.hpp"
#include "dha/errors.hpp"

namespace dha {

std::string to_string(FamilyTag t) {
    switch (t) {
        case FamilyTag::all: return "all";
        case FamilyTag::dyadic: return "dyadic";
        case FamilyTag::two_sided: return "two-sided";
        case FamilyTag::shifted: return "shifted";
    }
    return "?";
}

FamilyTag family_from_string(const std::string& s) {
    if (s == "all") return FamilyTag::all;
    if (s == "dyadic") return FamilyTag::dyadic;
    if (s == "two-sided" || s == "two_sided") return FamilyTag::two_sided;
    if (s == "shifted") return FamilyTag::shifted;
    throw ParseError("unknown interval family '" + s + "'");
}

GridInterval default_window(const StepFunction& f) {
    const int L = covering_scale(f, f.cell_scale());
    return {-pow2(L + 1), pow2(L + 1)};
}

namespace {

constexpr std::int64_t kMaxSweepCells = std::int64_t{1} << 15;

// Every family value goes through this one routine, so the same interval
// always yields the same double regardless of which family visits it.
double oscillation(const std::vector<double>& v, std::int64_t i0, std::int64_t i1) {
    const auto cnt = static_cast<double>(i1 - i0);
    double s = 0.0;
    for (std::int64_t i = i0; i < i1; ++i) s += v[static_cast<std::size_t>(i)];
    const double mean = s / cnt;
    double d = 0.0;
    for (std::int64_t i = i0; i < i1; ++i) d += std::fabs(v[static_cast<std::size_t>(i)] - mean);
    return d / cnt;
}

// Signed twin of `oscillation` on a shifted interval: the same terms with a
// minus sign on the right block. |result| <= oscillation holds in floating
// point because rounding is monotone and symmetric.
double signed_block_difference(const std::vector<double>& v, std::int64_t i0, std::int64_t i1) {
    const std::int64_t mid = i0 + (i1 - i0) / 2;
    const auto cnt = static_cast<double>(i1 - i0);
    double s = 0.0;
    for (std::int64_t i = i0; i < i1; ++i) s += v[static_cast<std::size_t>(i)];
    const double mean = s / cnt;
    double d = 0.0;
    for (std::int64_t i = i0; i < i1; ++i) {
        const double t = v[static_cast<std::size_t>(i)] - mean;
        d += i < mid ? t : -t;
    }
    return std::fabs(d) / cnt;
}

int alignment_scale(const GridInterval& J, int start) {
    for (int s = start; s >= -900; --s)
        if (J.aligned_to(s)) return s;
    throw AlignmentError("interval " + to_string(J) + " is not on a dyadic grid");
}

// Dense window cells of f at a scale on which the window is aligned.
struct WindowCells {
    int scale = 0;
    std::int64_t first = 0;
    std::vector<double> v;

    std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
    GridInterval interval(std::int64_t i0, std::int64_t i1) const {
        return {std::ldexp(static_cast<double>(first + i0), scale),
                std::ldexp(static_cast<double>(first + i1), scale)};
    }
};

WindowCells window_cells(const StepFunction& f, const GridInterval& window) {
    if (!(window.length() > 0.0)) throw DomainError("empty window");
    const int m = alignment_scale(window, f.cell_scale());
    const StepFunction g = m < f.cell_scale() ? f.refined(m) : f;
    if (g.cell_start() < g.cell_end()) {
        const StepFunction t = g.trimmed();
        if (!t.empty() && (t.lo() < window.lo || t.hi() > window.hi))
            throw PreconditionError("window " + to_string(window) + " does not cover the support");
    }
    WindowCells w;
    w.scale = m;
    w.first = static_cast<std::int64_t>(std::ldexp(window.lo, -m));
    const auto last = static_cast<std::int64_t>(std::ldexp(window.hi, -m));
    if (last - w.first > kMaxCells) throw RangeError("window holds too many cells");
    w.v = cells(g, w.first, last);
    return w;
}

struct Best {
    NormReport r;
    bool any = false;

    void offer(double value, const GridInterval& J, int n = 0, std::int64_t k = 0) {
        const bool better = !any || value > r.value ||
                            (value == r.value && (J.length() < r.witness.length() ||
                                                  (J.length() == r.witness.length() && J.lo < r.witness.lo)));
        if (better) {
            r.value = value;
            r.witness = J;
            r.n = n;
            r.k = k;
            any = true;
        }
    }

    NormReport take(FamilyTag tag) {
        if (!any) throw DomainError("interval family is empty in this window");
        r.family = tag;
        return r;
    }
};

// Calls visit(n, k, i0, i1) for every shifted interval J_{n,k} inside the window.
template <class Visit>
void for_each_shifted(const WindowCells& w, const IntervalFamily& fam, bool origin_only, Visit visit) {
    for (int n = std::max(fam.n_lo, w.scale); n <= fam.n_hi; ++n) {
        if (n - w.scale > 40) break;
        const std::int64_t B = std::int64_t{1} << (n - w.scale);
        if (2 * B > w.size()) break;
        const std::int64_t k_lo = ceil_div(w.first, B) + 1;
        const std::int64_t k_hi = floor_div(w.first + w.size(), B) - 1;
        for (std::int64_t k = k_lo; k <= k_hi; ++k) {
            if (origin_only && k != 0) continue;
            const std::int64_t i0 = (k - 1) * B - w.first;
            visit(n, k, i0, i0 + 2 * B);
        }
    }
}

}  // namespace

double mean_oscillation(const StepFunction& f, const GridInterval& J) {
    if (!(J.length() > 0.0)) throw DomainError("mean_oscillation: empty interval");
    const int m = alignment_scale(J, f.cell_scale());
    const StepFunction g = m < f.cell_scale() ? f.refined(m) : f;
    const auto first = static_cast<std::int64_t>(std::ldexp(J.lo, -m));
    const auto last = static_cast<std::int64_t>(std::ldexp(J.hi, -m));
    if (last - first > kMaxCells) throw RangeError("mean_oscillation: interval holds too many cells");
    const std::vector<double> v = cells(g, first, last);
    return oscillation(v, 0, last - first);
}

NormReport bmo_norm(const StepFunction& f, const IntervalFamily& family) {
    const WindowCells w = window_cells(f, family.window.value_or(default_window(f)));
    const std::int64_t N = w.size();
    Best best;
    switch (family.tag) {
        case FamilyTag::all:
        case FamilyTag::two_sided: {
            if (N > kMaxSweepCells) throw RangeError("bmo_norm: window too large for the interval sweep");
            const std::int64_t origin = -w.first;  // window index of x = 0
            for (std::int64_t i0 = 0; i0 < N; ++i0) {
                for (std::int64_t i1 = i0 + 1; i1 <= N; ++i1) {
                    if (family.tag == FamilyTag::two_sided && i0 < origin && i1 > origin) continue;
                    best.offer(oscillation(w.v, i0, i1), w.interval(i0, i1));
                }
            }
            break;
        }
        case FamilyTag::dyadic:
            for (int n = std::max(family.n_lo, w.scale); n <= family.n_hi; ++n) {
                if (n - w.scale > 40) break;
                const std::int64_t B = std::int64_t{1} << (n - w.scale);
                if (B > N) break;
                for (std::int64_t k = ceil_div(w.first, B); (k + 1) * B <= w.first + N; ++k) {
                    const std::int64_t i0 = k * B - w.first;
                    best.offer(oscillation(w.v, i0, i0 + B), w.interval(i0, i0 + B), n, k);
                }
            }
            break;
        case FamilyTag::shifted:
            for_each_shifted(w, family, false, [&](int n, std::int64_t k, std::int64_t i0, std::int64_t i1) {
                best.offer(oscillation(w.v, i0, i1), w.interval(i0, i1), n, k);
            });
            break;
    }
    return best.take(family.tag);
}

NormReport a_functional(const StepFunction& f, const IntervalFamily& family) {
    const WindowCells w = window_cells(f, family.window.value_or(default_window(f)));
    Best best;
    for_each_shifted(w, family, false, [&](int n, std::int64_t k, std::int64_t i0, std::int64_t i1) {
        best.offer(signed_block_difference(w.v, i0, i1), w.interval(i0, i1), n, k);
    });
    return best.take(FamilyTag::shifted);
}

double lambda_norm(const StepFunction& f, const IntervalFamily& family) {
    IntervalFamily d = family;
    d.tag = FamilyTag::dyadic;
    return std::max(bmo_norm(f, d).value, a_functional(f, family).value);
}

NormReport a0_functional(const StepFunction& f, const IntervalFamily& family) {
    const WindowCells w = window_cells(f, family.window.value_or(default_window(f)));
    Best best;
    for_each_shifted(w, family, true, [&](int n, std::int64_t k, std::int64_t i0, std::int64_t i1) {
        best.offer(signed_block_difference(w.v, i0, i1), w.interval(i0, i1), n, k);
    });
    return best.take(FamilyTag::shifted);
}

double ab_functional(const StepFunction& f) {
    const double left = integrate_refining(f, {-1.0, 0.0});
    const double right = integrate_refining(f, {0.0, 1.0});
    return std::fabs(0.5 * left - 0.5 * right);
}

ExtensionReport extension_criteria(const StepFunction& f, std::optional<GridInterval> window) {
    const StepFunction t = f.trimmed();
    if (!t.empty() && t.lo() < 0.0)
        throw PreconditionError("extension_criteria: function must vanish on (-inf, 0)");
    const double e = std::max(t.empty() ? 0.0 : t.hi(), f.cell_length());
    const GridInterval win = window.value_or(GridInterval{-e, e});
    if (win.lo != -win.hi)
        throw PreconditionError("extension_criteria: window must be symmetric about 0");

    ExtensionReport r;
    const StepFunction pos = restrict(f, Side::positive);
    r.even_norm = bmo_norm(reflect_even(pos), {FamilyTag::all, -10, 10, win}).value;
    r.two_sided_norm = bmo_norm(pos, {FamilyTag::two_sided, -10, 10, win}).value;
    r.odd_norm = bmo_norm(reflect_odd(pos), {FamilyTag::all, -10, 10, win}).value;
    if (r.two_sided_norm > 0.0) {
        r.ratio = r.even_norm / r.two_sided_norm;
    } else {
        r.ratio = r.even_norm == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    r.ratio_flag = r.ratio < 1.0 - 1e-12 || r.ratio > 1.0 + 1e-9;

    const int m = f.cell_scale();
    double prev = 0.0;
    r.g_scale = m;
    for (int n = m; pow2(n) <= win.hi; ++n) {
        const double g = std::fabs(integrate_refining(pos, {0.0, pow2(n)})) / pow2(n);
        if (g > r.g_value || n == m) {
            r.g_value = g;
            r.g_scale = n;
        }
        if (pow2(n + 1) > win.hi) {
            r.g_top = g;
            r.odd_unbounded = n > m && g > prev + tolerance();
        }
        prev = g;
    }
    const double denom = r.two_sided_norm + r.g_value;
    r.odd_ratio = denom > 0.0 ? r.odd_norm / denom : 0.0;
    return r;
}

StepFunction log_abs_function(int cell_scale, int L) {
    if (L - cell_scale > 22) throw RangeError("log_abs_function: grid too large");
    const std::int64_t half = std::int64_t{1} << (L - cell_scale);
    const double h = pow2(cell_scale);
    std::vector<double> v(static_cast<std::size_t>(2 * half));
    for (std::int64_t i = 0; i < half; ++i) {
        const double a = log_integral(std::ldexp(static_cast<double>(i), cell_scale),
                                      std::ldexp(static_cast<double>(i + 1), cell_scale)) / h;
        v[static_cast<std::size_t>(half + i)] = a;
        v[static_cast<std::size_t>(half - 1 - i)] = a;
    }
    return {cell_scale, -half, std::move(v)};
}

double kappa_ln(int cell_scale, int L) {
    // Both half-lines carry the same values, so the positive side suffices.
    const StepFunction f = restrict(log_abs_function(cell_scale, L), Side::positive);
    return bmo_norm(f, {FamilyTag::two_sided, -10, 10, GridInterval{0.0, pow2(L)}}).value;
}

}  // namespace dha

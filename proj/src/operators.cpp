#include "dha/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dha/errors.hpp"

namespace dha {

double SampledFunction::value_at(double x) const {
    if (values.empty() || x < lo || x >= hi()) return 0.0;
    const auto i = static_cast<std::size_t>(std::floor((x - lo) / step));
    return i < values.size() ? values[i] : 0.0;
}

SampledFunction to_sampled(const StepFunction& f, int refine) {
    if (refine < 1) throw DomainError("refinement must be at least 1");
    SampledFunction g;
    g.lo = f.lo();
    g.step = f.cell_length() / refine;
    g.refine = refine;
    g.values.reserve(f.size() * static_cast<std::size_t>(refine));
    for (double v : f.values())
        for (int r = 0; r < refine; ++r) g.values.push_back(v);
    return g;
}

SampledFunction tau(const StepFunction& f, double eps, int refine) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("tau: epsilon must lie in [0, 1]");
    if (refine < 1) throw DomainError("tau: refinement must be at least 1");
    const StepFunction t = f.trimmed();
    const double h = f.cell_length();
    SampledFunction g;
    g.step = h / refine;
    g.refine = refine;
    if (t.empty()) return g;

    const std::int64_t E = std::max<std::int64_t>({0, t.cell_end(), -t.cell_start()});
    if (2 * E * refine > kMaxCells) throw RangeError("tau: too many samples");
    g.lo = -static_cast<double>(E) * h;
    g.values.assign(static_cast<std::size_t>(2 * E * refine), 0.0);

    // G(x) = integral_0^x (f(y) + f(-y)) dy = integral_{-x}^{x} f for x > 0.
    CompensatedSum prefix;
    for (std::int64_t j = 0; j < E; ++j) {
        const double s = t.at_cell(j) + t.at_cell(-j - 1);
        const double base = prefix.value();
        for (int r = 0; r < refine; ++r) {
            const double off = (r + 0.5) * g.step;
            const double x = static_cast<double>(j) * h + off;
            const double inner = base + s * off;
            const double v = inner == 0.0 ? 0.0 : std::pow(x, eps - 1.0) * inner;
            const auto pos = static_cast<std::size_t>((E + j) * refine + r);
            const auto neg = static_cast<std::size_t>((E - j) * refine - 1 - r);
            g.values[pos] = v;
            g.values[neg] = -v;
        }
        prefix.add(s * h);
    }
    return g;
}

namespace {

double lp_of(std::span<const double> v, double w, double p) {
    if (!(p >= 1.0)) throw DomainError("p must be at least 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    CompensatedSum acc;
    for (double x : v)
        if (x != 0.0) acc.add(std::pow(std::fabs(x), p) * w);
    return std::pow(acc.value(), 1.0 / p);
}

double weak_of(std::span<const double> v, double w, double p) {
    if (!(p >= 1.0)) throw DomainError("p must be at least 1");
    std::vector<double> a;
    for (double x : v)
        if (x != 0.0) a.push_back(std::fabs(x));
    if (a.empty()) return 0.0;
    std::sort(a.begin(), a.end(), std::greater<>());
    if (std::isinf(p)) return a.front();
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // Measure of {|g| >= a[i]}, counting every tie.
        if (i + 1 < a.size() && a[i + 1] == a[i]) continue;
        best = std::max(best, a[i] * std::pow(w * static_cast<double>(i + 1), 1.0 / p));
    }
    return best;
}

}  // namespace

double lp_norm(const StepFunction& f, double p) { return lp_of(f.values(), f.cell_length(), p); }
double lp_norm(const SampledFunction& g, double p) { return lp_of(g.values, g.step, p); }
double weak_lp(const StepFunction& f, double p) { return weak_of(f.values(), f.cell_length(), p); }
double weak_lp(const SampledFunction& g, double p) { return weak_of(g.values, g.step, p); }

QuadratureReport tau_lp_norm(const StepFunction& f, double eps, double p, int refine) {
    QuadratureReport q;
    q.coarse = lp_norm(tau(f, eps, refine), p);
    q.value = lp_norm(tau(f, eps, 2 * refine), p);
    const double scale = std::max(std::fabs(q.value), std::fabs(q.coarse));
    q.rel_diff = scale > 0.0 ? std::fabs(q.value - q.coarse) / scale : 0.0;
    q.converged = q.rel_diff <= 0.01;
    return q;
}

MaximalResult maximal_dyadic(const StepFunction& f, double eps, int L, std::optional<int> truncate) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("maximal_dyadic: epsilon must lie in [0, 1)");
    const int m = f.cell_scale();
    if (L < m) throw DomainError("maximal_dyadic: window smaller than one cell");
    if (L + 1 - m > 24) throw RangeError("maximal_dyadic: window holds too many cells");
    const std::int64_t half = std::int64_t{1} << (L - m);
    const std::int64_t first = -half;
    const StepFunction t = f.trimmed();
    if (!t.empty() && (t.cell_start() < first || t.cell_end() > half))
        throw PreconditionError("maximal_dyadic: support exceeds the window");

    const double h = f.cell_length();
    const std::vector<double> v = cells(f, first, half);
    const std::size_t W = v.size();
    std::vector<double> out(W, 0.0);

    int n_lo = m;
    int n_hi = L;
    if (truncate) {
        if (*truncate < 0) throw DomainError("maximal_dyadic: truncation must be non-negative");
        n_lo = std::max(m, -*truncate);
        n_hi = std::min(L, *truncate);
        // Intervals shorter than a cell: the largest admissible one wins.
        if (*truncate < m) {
            const double factor = std::exp2(*truncate * eps);
            for (std::size_t i = 0; i < W; ++i) out[i] = std::fabs(v[i]) * factor;
        }
    }

    std::vector<double> sums = v;
    for (int n = m; n <= L; ++n) {
        const std::size_t B = std::size_t{1} << (n - m);
        if (n > m) {
            std::vector<double> next(sums.size() / 2);
            for (std::size_t k = 0; k < next.size(); ++k) next[k] = sums[2 * k] + sums[2 * k + 1];
            sums = std::move(next);
        }
        if (n < n_lo || n > n_hi) continue;
        const double factor = std::exp2(n * (eps - 1.0));
        for (std::size_t k = 0; k < sums.size(); ++k) {
            const double term = std::fabs(sums[k]) * h * factor;
            if (term == 0.0) continue;
            for (std::size_t i = k * B; i < (k + 1) * B; ++i) out[i] = std::max(out[i], term);
        }
    }

    MaximalResult r;
    r.values = StepFunction(m, first, std::move(out));
    const bool reaches_out = !truncate || *truncate > L;
    r.tail_bound = reaches_out ? std::exp2(L * (eps - 1.0)) * f.l1_norm() : 0.0;
    return r;
}

OpNormReport op_norm_estimate(const SampledOperator& T, const std::vector<OperatorPart>& parts, double p,
                              bool linear, std::uint64_t seed) {
    OpNormReport rep;
    std::vector<const StepFunction*> pool;
    for (const auto& part : parts) {
        PartReport pr;
        pr.name = part.name;
        pr.count = part.atoms.size();
        for (std::size_t i = 0; i < part.atoms.size(); ++i) {
            const double v = lp_norm(T(part.atoms[i]), p);
            if (v > pr.sup) {
                pr.sup = v;
                pr.argmax = i;
            }
            pool.push_back(&part.atoms[i]);
        }
        rep.overall = std::max(rep.overall, pr.sup);
        rep.parts.push_back(pr);
    }

    if (linear && pool.size() >= 2) {
        Rng rng(seed);
        for (int trial = 0; trial < 8; ++trial) {
            const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(pool.size()) - 1));
            const auto j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(pool.size()) - 1));
            const auto [f, g] = common_grid(*pool[i], *pool[j]);
            const double alpha = quantize(rng.uniform(-2.0, 2.0));
            const double beta = quantize(rng.uniform(-2.0, 2.0));
            const SampledFunction Th = T(combine(f, alpha, g, beta));
            const SampledFunction Tf = T(f);
            const SampledFunction Tg = T(g);
            double scale = 1.0;
            double err = 0.0;
            for (const SampledFunction* s : {&Th, &Tf, &Tg}) {
                for (std::size_t k = 0; k < s->values.size(); ++k) {
                    const double x = s->midpoint(k);
                    const double a = Th.value_at(x);
                    const double b = alpha * Tf.value_at(x) + beta * Tg.value_at(x);
                    scale = std::max({scale, std::fabs(a), std::fabs(b)});
                    err = std::max(err, std::fabs(a - b));
                }
            }
            if (err > 1e-9 * scale)
                throw ContractError("op_norm_estimate: operator is not additive on sampled atoms");
        }
    }
    return rep;
}

}  // namespace dha

#include "dha/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dha/errors.hpp"

namespace dha {

AtomReport validate_atom(const StepFunction& shape, const GridInterval& defining) {
    AtomReport r;
    const double len = defining.length();
    if (!(len > 0.0)) {
        r.max_violation = std::numeric_limits<double>::infinity();
        return r;
    }
    const double bound = 1.0 / len;
    double outside = 0.0;
    for (std::int64_t i = shape.cell_start(); i < shape.cell_end(); ++i) {
        const double v = shape.at_cell(i);
        if (v == 0.0) continue;
        const GridInterval cell{shape.cell_lo(i), shape.cell_lo(i + 1)};
        if (!defining.contains(cell)) outside = std::max(outside, std::fabs(v));
    }
    const double tol = tolerance();
    r.support_violation = outside;
    r.size_violation = std::max(0.0, shape.sup_abs() - bound);
    r.cancellation_violation = std::fabs(shape.integral());
    r.max_violation = std::max({r.support_violation, r.size_violation, r.cancellation_violation});
    r.ok = r.support_violation <= tol * bound && r.size_violation <= tol * bound &&
           r.cancellation_violation <= tol;
    return r;
}

std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::general: return "general";
        case Flavor::dyadic: return "dyadic";
        case Flavor::two_sided: return "two-sided";
        case Flavor::special: return "special";
        case Flavor::special_origin: return "special-origin";
    }
    return "general";
}

Flavor flavor_from_string(const std::string& s) {
    if (s == "general") return Flavor::general;
    if (s == "dyadic") return Flavor::dyadic;
    if (s == "two-sided" || s == "two_sided") return Flavor::two_sided;
    if (s == "special") return Flavor::special;
    if (s == "special-origin" || s == "special_origin") return Flavor::special_origin;
    throw ParseError("unknown flavor '" + s + "'");
}

double AtomicDecomposition::cost() const {
    CompensatedSum acc;
    for (const auto& t : terms) acc.add(std::fabs(t.lambda));
    return acc.value();
}

StepFunction AtomicDecomposition::reconstruct() const {
    int m = std::numeric_limits<int>::max();
    std::int64_t first = 0;
    std::int64_t last = 0;
    bool any = false;
    for (const auto& t : terms) m = std::min(m, t.atom.shape.cell_scale());
    if (terms.empty()) return StepFunction::zero(0);
    for (const auto& t : terms) {
        const auto& s = t.atom.shape;
        if (s.empty()) continue;
        const std::int64_t r = std::int64_t{1} << (s.cell_scale() - m);
        const std::int64_t a = s.cell_start() * r;
        const std::int64_t b = s.cell_end() * r;
        first = any ? std::min(first, a) : a;
        last = any ? std::max(last, b) : b;
        any = true;
    }
    if (!any) return StepFunction::zero(m);
    if (last - first > kMaxCells) throw RangeError("reconstruct: grid too large");
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(last - first));
    for (const auto& t : terms) {
        const auto& s = t.atom.shape;
        const std::int64_t r = std::int64_t{1} << (s.cell_scale() - m);
        for (std::int64_t i = s.cell_start(); i < s.cell_end(); ++i) {
            const double v = t.lambda * s.at_cell(i);
            if (v == 0.0) continue;
            for (std::int64_t j = i * r; j < (i + 1) * r; ++j) {
                acc[static_cast<std::size_t>(j - first)].add(v);
            }
        }
    }
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].value();
    return {m, first, std::move(out)};
}

namespace {

bool is_special(const Atom& a, bool origin_only) {
    const double len = a.defining.length();
    int e = 0;
    if (!(len > 0.0) || std::frexp(len, &e) != 0.5) return false;
    const int n = e - 2;  // support length 2^(n+1)
    const double q = std::ldexp(a.defining.lo, -n);
    if (std::floor(q) != q) return false;
    const auto k = static_cast<std::int64_t>(q) + 1;
    if (origin_only && k != 0) return false;
    if (a.shape.cell_scale() > n) return false;
    return same_function(a.shape, special_atom(n, k, a.shape.cell_scale()));
}

}  // namespace

bool AtomicDecomposition::flavor_consistent() const {
    for (const auto& t : terms) {
        switch (flavor) {
            case Flavor::general: break;
            case Flavor::dyadic:
                if (!as_dyadic(t.atom.defining)) return false;
                break;
            case Flavor::two_sided:
                if (!t.atom.defining.one_sided()) return false;
                break;
            case Flavor::special:
                if (!is_special(t.atom, false)) return false;
                break;
            case Flavor::special_origin:
                if (!is_special(t.atom, true)) return false;
                break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Three-atom splitting

StepFunction SplitResult::special() const {
    const int m = std::min(a_left.shape.cell_scale(), a_right.shape.cell_scale());
    return special_atom(n, k, m);
}

StepFunction SplitResult::reconstruct() const {
    return combine(combine(a_left.shape, c1, a_right.shape, c2), 1.0, special(), c3);
}

SplitResult split_atom(const Atom& a, ScaleWindow window) {
    const GridInterval I = a.defining;
    const double len = I.length();
    if (!(len > 0.0)) throw DomainError("split_atom: empty defining interval");
    if (!validate_atom(a).ok) throw PreconditionError("split_atom: input is not an atom of its interval");
    int n = 0;
    std::frexp(len, &n);  // 2^(n-1) <= |I| < 2^n
    if (n - 1 < window.min || n > window.max + 1) {
        throw RangeError("split_atom: |I| = " + std::to_string(len) + " is outside the scale window");
    }
    const double block = pow2(n);
    const double q_lo = std::floor(I.lo / block);
    std::int64_t k = static_cast<std::int64_t>(q_lo);
    // A multiple of 2^n strictly inside I is unique because |I| < 2^n.
    if ((q_lo + 1.0) * block < I.hi) k += 1;

    const int m = std::min(a.shape.cell_scale(), n);
    const StepFunction f = a.shape.refined(m);
    const std::int64_t B = std::int64_t{1} << (n - m);
    const std::int64_t left0 = (k - 1) * B;
    const std::int64_t mid = k * B;
    const std::int64_t right1 = (k + 1) * B;
    for (std::int64_t i = f.cell_start(); i < f.cell_end(); ++i) {
        if ((i < left0 || i >= right1) && f.at_cell(i) != 0.0) {
            throw PreconditionError("split_atom: shape is not supported in its defining interval");
        }
    }

    std::vector<double> left = cells(f, left0, mid);
    std::vector<double> right = cells(f, mid, right1);
    const double sum_left = compensated_sum(left);
    const double sum_right = compensated_sum(right);
    const double mean_left = sum_left / static_cast<double>(B);
    const double mean_right = sum_right / static_cast<double>(B);
    for (double& v : left) v = 0.25 * (v - mean_left);
    for (double& v : right) v = 0.25 * (v - mean_right);

    SplitResult r;
    r.n = n;
    r.k = k;
    r.c1 = 4.0;
    r.c2 = 4.0;
    r.c3 = 2.0 * sum_left * f.cell_length();
    r.a_left = Atom{StepFunction(m, left0, std::move(left)), DyadicInterval{n, k - 1}.grid()};
    r.a_right = Atom{StepFunction(m, mid, std::move(right)), DyadicInterval{n, k}.grid()};
    return r;
}

// ---------------------------------------------------------------------------
// Haar expansion

int covering_scale(const StepFunction& f, int min_scale) {
    const auto supp = f.support();
    if (!supp) return min_scale;
    const double reach = std::max(std::fabs(supp->lo), std::fabs(supp->hi));
    int L = min_scale;
    while (pow2(L) < reach) ++L;
    return L;
}

double HaarExpansion::cost() const {
    CompensatedSum acc;
    for (const auto& [I, c] : coefficients) acc.add(std::fabs(c));
    return acc.value();
}

StepFunction HaarExpansion::reconstruct() const {
    const std::int64_t half = std::int64_t{1} << (max_scale - cell_scale);
    std::vector<double> v = cells(residual, -half, half);
    for (const auto& [I, c] : coefficients) {
        const std::int64_t w = std::int64_t{1} << (I.n - 1 - cell_scale);
        const std::int64_t first = I.k * 2 * w + half;
        const double h = c / I.length();
        for (std::int64_t j = 0; j < w; ++j) {
            v[static_cast<std::size_t>(first + j)] += h;
            v[static_cast<std::size_t>(first + w + j)] -= h;
        }
    }
    return {cell_scale, -half, std::move(v)};
}

HaarExpansion haar_expand(const StepFunction& f, int max_scale) {
    if (const auto supp = f.support()) {
        const double R = pow2(max_scale);
        if (supp->lo < -R || supp->hi > R) {
            throw RangeError("haar_expand: support " + to_string(*supp) + " exceeds [-2^L, 2^L)");
        }
    }
    const int m = std::min(f.cell_scale(), max_scale);
    if (max_scale - m > 30) throw RangeError("haar_expand: too many levels");
    const StepFunction g = f.refined(m);
    const std::int64_t half = std::int64_t{1} << (max_scale - m);
    const double h = pow2(m);

    HaarExpansion out;
    out.max_scale = max_scale;
    out.cell_scale = m;

    std::vector<double> top_means;
    for (int side = 0; side < 2; ++side) {
        const std::int64_t first = side == 0 ? -half : 0;
        std::vector<double> sums = cells(g, first, first + half);
        std::int64_t pos0 = first;  // global index of sums[0] at the current level
        for (int s = m + 1; s <= max_scale; ++s) {
            std::vector<double> parent(sums.size() / 2);
            pos0 /= 2;
            for (std::size_t j = 0; j < parent.size(); ++j) {
                const double c = h * (sums[2 * j] - sums[2 * j + 1]);
                parent[j] = sums[2 * j] + sums[2 * j + 1];
                if (c != 0.0) {
                    out.coefficients.emplace(DyadicInterval{s, pos0 + static_cast<std::int64_t>(j)}, c);
                }
            }
            sums = std::move(parent);
        }
        top_means.push_back(sums.front() * h / pow2(max_scale));
    }
    std::vector<double> res(static_cast<std::size_t>(2 * half));
    std::fill(res.begin(), res.begin() + half, top_means[0]);
    std::fill(res.begin() + half, res.end(), top_means[1]);
    out.residual = StepFunction(m, -half, std::move(res));
    return out;
}

double positive_half_integral(const StepFunction& f) {
    if (f.hi() <= 0.0) return 0.0;
    return integrate(f, {std::max(0.0, f.lo()), f.hi()});
}

// ---------------------------------------------------------------------------
// Decompositions

namespace {

double mass_tolerance(const StepFunction& f) { return tolerance() * std::max(1.0, f.l1_norm()); }

void require_zero_integral(const StepFunction& f, const char* who) {
    if (std::fabs(f.integral()) > mass_tolerance(f)) {
        throw PreconditionError(std::string(who) + ": function does not have zero integral");
    }
}

void append_haar_terms(const StepFunction& g, std::vector<Term>& terms) {
    const HaarExpansion e = haar_expand(g, covering_scale(g, g.cell_scale() + 1));
    for (const auto& [I, c] : e.coefficients) {
        terms.push_back(Term{c, Atom{haar(I, I.n - 1), I.grid()}});
    }
}

}  // namespace

AtomicDecomposition decompose(const StepFunction& f, Flavor flavor) {
    require_zero_integral(f, "decompose");
    const double A = positive_half_integral(f);
    AtomicDecomposition d;
    d.flavor = flavor;
    switch (flavor) {
        case Flavor::dyadic:
        case Flavor::two_sided:
            if (std::fabs(A) > mass_tolerance(f)) {
                throw InfeasibleError("decompose: integral over [0,inf) is nonzero", A);
            }
            append_haar_terms(f, d.terms);
            return d;
        case Flavor::general: {
            const StepFunction b = b_function(std::min(f.cell_scale(), -1));
            if (A == 0.0) {
                append_haar_terms(f, d.terms);
                return d;
            }
            append_haar_terms(combine(f, 1.0, b, 2.0 * A), d.terms);
            d.terms.push_back(Term{-2.0 * A, Atom{b, {-1.0, 1.0}}});
            return d;
        }
        case Flavor::special:
        case Flavor::special_origin:
            break;
    }
    throw DomainError("decompose: flavor " + to_string(flavor) + " has no constructive route");
}

namespace {

bool accepts(Flavor requested, Flavor candidate) {
    switch (requested) {
        case Flavor::general: return true;
        case Flavor::two_sided: return candidate == Flavor::two_sided || candidate == Flavor::dyadic;
        case Flavor::dyadic: return candidate == Flavor::dyadic;
        case Flavor::special:
            return candidate == Flavor::special || candidate == Flavor::special_origin;
        case Flavor::special_origin: return candidate == Flavor::special_origin;
    }
    return false;
}

}  // namespace

double h1_upper(const StepFunction& f, Flavor flavor, std::span<const AtomicDecomposition> candidates) {
    require_zero_integral(f, "h1_upper");
    double best = std::numeric_limits<double>::infinity();
    if (flavor == Flavor::general || flavor == Flavor::dyadic || flavor == Flavor::two_sided) {
        best = decompose(f, flavor).cost();
    }

    if (const auto supp = f.support()) {
        std::optional<GridInterval> J;
        switch (flavor) {
            case Flavor::general: J = *supp; break;
            case Flavor::two_sided:
                if (supp->one_sided()) J = *supp;
                break;
            case Flavor::dyadic:
                if (const auto D = smallest_dyadic_cover(*supp)) J = D->grid();
                break;
            default: break;
        }
        if (J) best = std::min(best, f.sup_abs() * J->length());
    } else {
        return 0.0;
    }

    const double tol = tolerance() * std::max(1.0, f.sup_abs());
    for (const auto& cand : candidates) {
        if (!accepts(flavor, cand.flavor) || !cand.flavor_consistent()) {
            throw PreconditionError("h1_upper: candidate decomposition has the wrong flavor");
        }
        for (const auto& t : cand.terms) {
            if (!validate_atom(t.atom).ok) {
                throw PreconditionError("h1_upper: candidate contains an invalid atom");
            }
        }
        if (max_difference(cand.reconstruct(), f) > tol) {
            throw PreconditionError("h1_upper: candidate does not reconstruct the function");
        }
        best = std::min(best, cand.cost());
    }
    return best;
}

DistanceResult distance_to_HA(const StepFunction& f) {
    require_zero_integral(f, "distance_to_HA");
    DistanceResult r;
    r.half_line_integral = positive_half_integral(f);
    r.obstruction = std::fabs(r.half_line_integral);
    if (r.half_line_integral == 0.0) {
        r.corrected = f;
        r.correction_cost = 0.0;
        return r;
    }
    const StepFunction b = b_function(std::min(f.cell_scale(), -1));
    r.corrected = combine(f, 1.0, b, 2.0 * r.half_line_integral);
    r.correction_cost = h1_upper((-2.0 * r.half_line_integral) * b, Flavor::general);
    return r;
}

// ---------------------------------------------------------------------------
// Symmetrization

Atom symmetrize_atom(const Atom& a) {
    const StepFunction& s = a.shape;
    const std::int64_t e = std::max<std::int64_t>({0, s.cell_end(), -s.cell_start()});
    std::vector<double> v(static_cast<std::size_t>(e));
    for (std::int64_t i = 0; i < e; ++i) {
        v[static_cast<std::size_t>(i)] = 0.25 * (s.at_cell(i) + s.at_cell(-i - 1));
    }
    const GridInterval I = a.defining;
    GridInterval folded;
    if (I.lo >= 0.0) {
        folded = I;
    } else if (I.hi <= 0.0) {
        folded = {-I.hi, -I.lo};
    } else {
        folded = {0.0, std::max(I.hi, -I.lo)};
    }
    return Atom{StepFunction(s.cell_scale(), 0, std::move(v)).trimmed(), folded};
}

AtomicDecomposition symmetrize(const StepFunction& g, const AtomicDecomposition& dec) {
    for (std::int64_t i = g.cell_start(); i < std::min<std::int64_t>(0, g.cell_end()); ++i) {
        if (g.at_cell(i) != 0.0) throw PreconditionError("symmetrize: g has mass on the negative axis");
    }
    const double tol = tolerance() * std::max(1.0, g.sup_abs());
    if (max_difference(dec.reconstruct(), g) > tol) {
        throw PreconditionError("symmetrize: decomposition does not reconstruct g");
    }
    AtomicDecomposition out;
    out.flavor = Flavor::two_sided;
    for (const auto& t : dec.terms) {
        Atom folded = symmetrize_atom(t.atom);
        if (folded.shape.empty()) continue;
        out.terms.push_back(Term{4.0 * t.lambda, std::move(folded)});
    }
    return out;
}

}  // namespace dha

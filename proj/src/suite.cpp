#include "dha/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>

#include "dha/counterexample.hpp"
#include "dha/random.hpp"

namespace dha {

namespace {

struct Outcome {
    bool pass = true;
    Json details = Json::object();

    /// Records a named sub-check; the criterion passes only if all do.
    void check(const std::string& key, bool ok) {
        details["checks"][key] = ok;
        pass = pass && ok;
    }
};

std::uint64_t derive_seed(std::uint64_t seed, int id) {
    return seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(id));
}

IntervalFamily family(FamilyTag tag) {
    IntervalFamily f;
    f.tag = tag;
    return f;
}

/// Zero-integral function on a power-of-two number of cells straddling the
/// origin; values stay dyadic so half-line integrals are exact.
StepFunction random_h1(Rng& rng) {
    const int scale = static_cast<int>(rng.integer(-4, 0));
    const std::int64_t cells = std::int64_t{1} << rng.integer(2, 8);
    const double lo = -std::ldexp(static_cast<double>(rng.integer(1, cells - 1)), scale);
    const double hi = lo + std::ldexp(static_cast<double>(cells), scale);
    const StepFunction f = random_step(rng, scale, lo, hi);
    return f - StepFunction::indicator({lo, hi}, scale, f.integral() / (hi - lo));
}

Atom random_one_sided_atom(Rng& rng) {
    const int scale = static_cast<int>(rng.integer(-4, 0));
    const bool positive = rng.integer(0, 1) == 1;
    const GridInterval I = positive ? random_interval(rng, scale, 48, 0.0, 16.0)
                                    : random_interval(rng, scale, 48, -16.0, 0.0);
    return random_atom(rng, I, scale);
}

Outcome splitting(Rng& rng) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int coeff_bad = 0, validation_bad = 0, recon_bad = 0, sup_bad = 0;
    double worst_ratio = 0.0, worst_c3 = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int scale = static_cast<int>(rng.integer(-6, 0));
        const GridInterval I = random_interval(rng, scale, 64, -64.0, 64.0);
        const Atom a = random_atom(rng, I, scale);
        const SplitResult s = split_atom(a);
        const double sup = a.shape.sup_abs();
        const double err = max_difference(s.reconstruct(), a.shape);
        if (sup > 0.0) worst_ratio = std::max(worst_ratio, err / sup);
        if (err > std::ldexp(sup, -30)) ++recon_bad;
        if (std::fabs(s.c1) != 4.0 || std::fabs(s.c2) != 4.0 || std::fabs(s.c3) > 4.0) ++coeff_bad;
        worst_c3 = std::max(worst_c3, std::fabs(s.c3));
        for (const Atom* half : {&s.a_left, &s.a_right}) {
            if (!validate_atom(*half).ok || !as_dyadic(half->defining)) ++validation_bad;
            if (half->shape.sup_abs() > pow2(-s.n)) ++sup_bad;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.details["samples"] = 1000;
    o.details["worst_error_over_sup"] = worst_ratio;
    o.details["worst_abs_c3"] = worst_c3;
    o.check("reconstruction", recon_bad == 0);
    o.check("coefficients", coeff_bad == 0);
    o.check("halves_are_dyadic_atoms", validation_bad == 0);
    o.check("halves_sup_bound", sup_bad == 0);
    o.check("runtime_under_10s", secs < 10.0);
    return o;
}

Outcome haar_span(Rng& rng) {
    Outcome o;
    int zero_bad = 0, mass_bad = 0;
    double min_margin = INFINITY;
    for (int t = 0; t < 500; ++t) {
        const int scale = static_cast<int>(rng.integer(-4, 0));
        const StepFunction f = random_ha_function(rng, scale, static_cast<int>(rng.integer(0, 3)));
        const HaarExpansion e = haar_expand(f, covering_scale(f, scale + 1));
        if (e.residual.sup_abs() != 0.0) ++zero_bad;
    }
    int drawn = 0;
    while (drawn < 500) {
        const int scale = static_cast<int>(rng.integer(-4, 0));
        const StepFunction f = random_step(rng, scale, -8.0, 8.0);
        const double A = positive_half_integral(f);
        if (A == 0.0) continue;
        ++drawn;
        const HaarExpansion e = haar_expand(f, covering_scale(f, scale + 1));
        const double margin = e.residual.l1_norm() - (std::fabs(A) - tolerance());
        min_margin = std::min(min_margin, margin);
        if (margin < 0.0) ++mass_bad;
    }
    o.details["zero_half_line_samples"] = 500;
    o.details["nonzero_samples"] = 500;
    o.details["min_residual_margin"] = min_margin;
    o.check("residual_zero_on_HA", zero_bad == 0);
    o.check("residual_mass_at_least_obstruction", mass_bad == 0);
    return o;
}

Outcome distance(Rng& rng) {
    Outcome o;
    int exact_bad = 0, cost_bad = 0;
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const StepFunction f = random_h1(rng);
        const DistanceResult d = distance_to_HA(f);
        if (positive_half_integral(d.corrected) != 0.0) ++exact_bad;
        const double slack = d.correction_cost - 2.0 * d.obstruction;
        worst = std::max(worst, slack);
        if (slack > tolerance()) ++cost_bad;
    }
    o.details["samples"] = 500;
    o.details["worst_cost_minus_bound"] = worst;
    o.check("corrected_half_line_integral_zero", exact_bad == 0);
    o.check("correction_cost_bound", cost_bad == 0);
    return o;
}

StepFunction random_phi(Rng& rng) {
    const int scale = static_cast<int>(rng.integer(-2, 0));
    const double lo = static_cast<double>(rng.integer(-8, 0));
    const double hi = lo + static_cast<double>(rng.integer(1, 8));
    return random_step(rng, scale, lo, hi, static_cast<double>(rng.integer(1, 4)));
}

Outcome lambda_equivalence(Rng& rng) {
    Outcome o;
    int fwd_bad = 0, rev_bad = 0;
    double worst_fwd = -INFINITY, worst_ratio = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const StepFunction phi = random_phi(rng);
        const double lam = lambda_norm(phi);
        const double all = bmo_norm(phi).value;
        worst_fwd = std::max(worst_fwd, lam - all);
        if (lam > all + 1e-12) ++fwd_bad;
        if (lam > 0.0) worst_ratio = std::max(worst_ratio, all / lam);
        if (all > 24.0 * lam) ++rev_bad;
    }
    o.details["samples"] = 1000;
    o.details["worst_lambda_minus_bmo"] = worst_fwd;
    o.details["worst_bmo_over_lambda"] = worst_ratio;
    o.check("lambda_le_bmo", fwd_bad == 0);
    o.check("bmo_le_24_lambda", rev_bad == 0);
    return o;
}

Outcome shifted_families(Rng& rng) {
    Outcome o;
    int exact_bad = 0, comb_bad = 0;
    double worst_ratio = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const StepFunction phi = random_phi(rng);
        const double A = a_functional(phi).value;
        const double sh = bmo_norm(phi, family(FamilyTag::shifted)).value;
        const double dy = bmo_norm(phi, family(FamilyTag::dyadic)).value;
        const double all = bmo_norm(phi).value;
        if (!(A <= sh)) ++exact_bad;
        const double base = std::max(dy, sh);
        if (base > 0.0) worst_ratio = std::max(worst_ratio, all / base);
        if (all > 24.0 * base) ++comb_bad;
    }
    o.details["samples"] = 1000;
    o.details["worst_bmo_over_max_dyadic_shifted"] = worst_ratio;
    o.check("A_le_shifted_exact", exact_bad == 0);
    o.check("bmo_le_24_max_dyadic_shifted", comb_bad == 0);
    return o;
}

Outcome tau_bound(Rng& rng) {
    Outcome o;
    const double kappa = kappa_ln();
    o.details["kappa_ln"] = kappa;
    std::vector<Atom> atoms;
    for (int t = 0; t < 200; ++t) atoms.push_back(random_one_sided_atom(rng));
    Json per_eps = Json::array();
    bool bound_ok = true;
    for (double eps : {0.25, 0.5, 0.75}) {
        const double p = 1.0 / (1.0 - eps);
        const double bound = std::pow(2.0 * kappa, 1.0 / p);
        double worst = 0.0, worst_rel = 0.0;
        for (const Atom& a : atoms) {
            const QuadratureReport q = tau_lp_norm(a.shape, eps, p, 16);
            worst = std::max(worst, q.value);
            worst_rel = std::max(worst_rel, q.rel_diff);
        }
        const bool ok = worst <= 1.05 * bound;
        bound_ok = bound_ok && ok;
        per_eps.push_back({{"epsilon", eps}, {"p", p}, {"bound", bound}, {"worst_norm", worst},
                           {"worst_quadrature_rel_diff", worst_rel}, {"pass", ok}});
    }
    o.details["per_epsilon"] = per_eps;
    int nonzero = 0;
    for (int n = -10; n < 10; ++n) {
        const SampledFunction g = tau(special_atom(n, 0, n - 2), 0.5, 4);
        if (!std::all_of(g.values.begin(), g.values.end(), [](double v) { return v == 0.0; })) ++nonzero;
    }
    o.check("norm_bound", bound_ok);
    o.check("tau_b_n0_vanishes", nonzero == 0);
    return o;
}

Outcome maximal_dichotomy(Rng& rng) {
    Outcome o;
    int point_bad = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = static_cast<int>(rng.integer(-2, 3));
        const DyadicInterval I{n, rng.integer(-4, 3)};
        const Atom a = random_atom(rng, I.grid(), n - static_cast<int>(rng.integer(1, 3)));
        const double eps = 0.25 * static_cast<double>(rng.integer(1, 3));
        const MaximalResult r = maximal_dyadic(a.shape, eps, 6);
        const double bound = std::exp2(n * (eps - 1.0));
        for (std::int64_t i = r.values.cell_start(); i < r.values.cell_end(); ++i)
            if (r.values.at_cell(i) > (I.grid().contains(r.values.cell_lo(i)) ? bound : 0.0)) ++point_bad;
    }
    o.check("atom_pointwise_bound", point_bad == 0);

    const StepFunction b = b_function();
    bool ratio_ok = true, growth_ok = true, trunc_ok = true;
    Json per_eps = Json::array();
    for (double eps : {0.25, 0.5, 0.75}) {
        const double p = 1.0 / (1.0 - eps);
        const MaximalResult r = maximal_dyadic(b, eps, 10);
        double lo = INFINITY, hi = 0.0;
        for (std::int64_t i = r.values.cell_start(); i < r.values.cell_end(); ++i) {
            const double x = std::fabs(r.values.cell_lo(i) + 0.5 * r.values.cell_length());
            const double ratio = r.values.at_cell(i) / std::min(1.0, std::pow(x, eps - 1.0));
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        const bool rok = lo >= 0.25 && hi <= 4.0;

        Json increments = Json::array();
        double prev = 0.0, min_inc = INFINITY;
        for (int L = 4; L <= 10; ++L) {
            const double s = std::pow(lp_norm(maximal_dyadic(b, eps, L).values, p), p);
            if (L > 4) {
                increments.push_back(s - prev);
                min_inc = std::min(min_inc, s - prev);
            }
            prev = s;
        }
        const bool gok = min_inc >= 0.2 * std::numbers::ln2;

        const int N = 3;
        const double t0 = lp_norm(maximal_dyadic(b, eps, N + 1, N).values, p);
        bool stable = std::isfinite(t0);
        for (int L = N + 2; L <= 10; ++L) stable = stable && lp_norm(maximal_dyadic(b, eps, L, N).values, p) == t0;

        ratio_ok = ratio_ok && rok;
        growth_ok = growth_ok && gok;
        trunc_ok = trunc_ok && stable;
        per_eps.push_back({{"epsilon", eps}, {"p", p}, {"ratio_min", lo}, {"ratio_max", hi},
                           {"norm_p_increments", increments}, {"min_increment", min_inc},
                           {"required_increment", 0.2 * std::numbers::ln2}, {"growth_pass", gok},
                           {"truncated_norm", t0}, {"truncated_stable", stable}});
    }
    o.details["per_epsilon"] = per_eps;
    o.check("b_ratio_in_quarter_to_four", ratio_ok);
    o.check("b_norm_growth", growth_ok);
    o.check("truncated_norm_stable", trunc_ok);
    return o;
}

Outcome counterexample_criterion() {
    Outcome o;
    Json rows = Json::array();
    bool cost_ok = true;
    std::vector<double> moments;
    for (int N : {4, 8, 16, 32, 64}) {
        const Counterexample c(N);
        const AtomicDecomposition d = c.decomposition();
        const bool atoms_ok = std::all_of(d.terms.begin(), d.terms.end(),
                                          [](const Term& t) { return validate_atom(t.atom).ok; });
        const bool exact = c.decomposition_error() <= tolerance();
        // Uniform-grid cross-check where the grid is small enough.
        double h1 = d.cost();
        if (N <= 16) h1 = h1_upper(c.function(), Flavor::general, std::span(&d, 1));
        const double six_l = 6.0 * c.partial_constant();
        const bool ok = atoms_ok && exact && h1 <= six_l + tolerance() && six_l <= std::numbers::pi * std::numbers::pi;
        cost_ok = cost_ok && ok;
        moments.push_back(c.log_moment());
        rows.push_back({{"N", N}, {"h1_upper", h1}, {"h1_source", N <= 16 ? "grid search" : "piecewise decomposition"},
                        {"six_L_N", six_l}, {"log_moment", c.log_moment()},
                        {"log_moment_signed", c.log_moment_signed()}, {"spike_moment", c.spike_moment()},
                        {"pass", ok}});
    }
    bool monotone = true;
    for (std::size_t i = 1; i < moments.size(); ++i) monotone = monotone && moments[i] > moments[i - 1];
    const double ratio = moments[4] / moments[1];
    o.details["rows"] = rows;
    o.details["moment_ratio_64_over_8"] = ratio;
    o.check("cost_le_6L_le_pi2", cost_ok);
    o.check("moment_monotone", monotone);
    o.check("moment_ratio_ge_1_8", ratio >= 1.8);
    return o;
}

Outcome t1_bracket(std::uint64_t seed) {
    Outcome o;
    const int m = -4, L = 5;
    const KernelOperator T = catalog_kernel("blockdiag", m, L, seed);
    double worst = 0.0;
    bool preserving = true;
    for (int n = m; n <= L; ++n) {
        const BracketCheck br = bracket_identity(T, n);
        worst = std::max(worst, br.rel_err);
        preserving = preserving && br.support_preserving;
    }
    const double w = wbp(T).value;
    const T1Report r = bmo_conditions(T);
    o.details["window"] = {{"cell_scale", m}, {"L", L}};
    o.details["worst_rel_err"] = worst;
    o.details["wbp"] = w;
    o.details["c_2s"] = r.c_2s;
    o.check("support_preserving", preserving);
    o.check("bracket_identity", worst <= std::ldexp(1.0, -30));
    o.check("c2s_le_2_wbp", r.c_2s <= 2.0 * w);
    return o;
}

Outcome two_d(Rng& rng) {
    Outcome o;
    struct Gen {
        int j, n;
        std::int64_t k, l;
    };
    std::vector<Gen> gens;
    for (int n = -1; n <= 1; ++n) {
        const std::int64_t span = std::int64_t{1} << (n + 1);
        for (int j = 1; j <= 3; ++j)
            for (std::int64_t k = -span; k < span; ++k)
                for (std::int64_t l = -span; l < span; ++l) gens.push_back({j, n, k, l});
    }
    std::vector<StepFunction2D> fs;
    for (const Gen& g : gens) fs.push_back(psi(g.j, g.n, g.k, g.l, -3));
    std::size_t off = 0;
    for (std::size_t a = 0; a < fs.size(); ++a)
        for (std::size_t c = a; c < fs.size(); ++c)
            if (inner(fs[a], fs[c]) != (a == c ? 1.0 : 0.0)) ++off;
    o.details["generators"] = fs.size();
    o.check("orthonormal", off == 0);

    const std::array<std::array<double, 4>, 3> table{{{-0.5, 0.5, 0.0, 0.0}, {-0.5, 0.0, 0.0, 0.5}, {0.0, 0.0, 0.5, -0.5}}};
    bool quad_ok = true;
    Json q = Json::array();
    for (int w = 1; w <= 3; ++w) {
        const auto got = quadrant_integrals(special_b(w));
        quad_ok = quad_ok && got == table[static_cast<std::size_t>(w - 1)];
        q.push_back(quadrants_json(got));
    }
    o.details["special_b_quadrants"] = q;
    o.check("special_b_table", quad_ok);

    int nonvanishing = 0;
    for (int t = 0; t < 200; ++t) {
        StepFunction2D f(-3, 0, 0, 0, 0, {});
        const int terms = static_cast<int>(rng.integer(1, 6));
        for (int s = 0; s < terms; ++s)
            f = combine(f, 1.0, fs[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(fs.size()) - 1))],
                        quantize(rng.uniform(-1.0, 1.0)));
        const auto qi = quadrant_integrals(f);
        if (qi != std::array<double, 4>{0.0, 0.0, 0.0, 0.0}) ++nonvanishing;
    }
    o.check("quadrants_vanish_on_span", nonvanishing == 0);
    return o;
}

const char* criterion_name(int id) {
    static const char* names[] = {"atom splitting",
                                  "Haar span residual",
                                  "distance to the half-line space",
                                  "lambda norm equivalence",
                                  "shifted dyadic families",
                                  "tau bound",
                                  "maximal operator dichotomy",
                                  "counterexample",
                                  "T(1) bracket identity",
                                  "2D generators and quadrants"};
    return names[id - 1];
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    if (id < 1 || id > kCriterionCount) throw DomainError("criterion id must be in 1..10");
    const std::uint64_t s = derive_seed(seed, id);
    Rng rng(s);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        switch (id) {
            case 1: o = splitting(rng); break;
            case 2: o = haar_span(rng); break;
            case 3: o = distance(rng); break;
            case 4: o = lambda_equivalence(rng); break;
            case 5: o = shifted_families(rng); break;
            case 6: o = tau_bound(rng); break;
            case 7: o = maximal_dichotomy(rng); break;
            case 8: o = counterexample_criterion(); break;
            case 9: o = t1_bracket(s); break;
            default: o = two_d(rng); break;
        }
    } catch (const std::exception& e) {
        o.pass = false;
        o.details["exception"] = e.what();
    }
    CriterionResult r;
    r.id = id;
    r.name = criterion_name(id);
    r.pass = o.pass;
    r.details = std::move(o.details);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_suite(const SuiteConfig& config) {
    std::vector<int> ids = config.only;
    if (ids.empty())
        for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
    std::vector<std::future<CriterionResult>> jobs;
    for (int id : ids) jobs.push_back(std::async(std::launch::async, run_criterion, id, config.seed));
    std::vector<CriterionResult> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

Json suite_report(const SuiteConfig& config, const std::vector<CriterionResult>& results) {
    Json crit = Json::array();
    bool all = true;
    for (const CriterionResult& r : results) {
        all = all && r.pass;
        crit.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    }
    return {{"seed", config.seed}, {"pass", all}, {"criteria", crit}};
}

}  // namespace dha

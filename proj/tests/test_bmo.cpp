#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dha/bmo.hpp"
#include "dha/errors.hpp"
#include "dha/random.hpp"

using namespace dha;

namespace {

// Mean oscillation from exact partial-cell integrals, independent of the
// library's cell sweep.
double oscillation_oracle(const StepFunction& f, const GridInterval& J) {
    const double mean = integrate_refining(f, J) / J.length();
    const StepFunction c = StepFunction::indicator(J, f.cell_scale(), mean);
    const StepFunction d = f - c;
    CompensatedSum acc;
    for (std::int64_t i = d.cell_start(); i < d.cell_end(); ++i) {
        const GridInterval cell{d.cell_lo(i), d.cell_lo(i + 1)};
        if (J.contains(cell)) acc.add(std::fabs(d.at_cell(i)) * d.cell_length());
    }
    return acc.value() / J.length();
}

double brute_all(const StepFunction& f, const GridInterval& w) {
    const double h = f.cell_length();
    double best = 0.0;
    for (double lo = w.lo; lo < w.hi; lo += h)
        for (double hi = lo + h; hi <= w.hi; hi += h) best = std::max(best, oscillation_oracle(f, {lo, hi}));
    return best;
}

IntervalFamily fam(FamilyTag t, GridInterval w) { return {t, -10, 10, w}; }

}  // namespace

TEST_CASE("mean oscillation examples") {
    const StepFunction c = StepFunction::indicator({-4.0, 4.0}, 0, 3.0);
    CHECK(mean_oscillation(c, {-2.0, 3.0}) == 0.0);
    CHECK(mean_oscillation(StepFunction::indicator({0.0, 0.5}, -1), {0.0, 1.0}) == 0.5);
    CHECK(mean_oscillation(haar({0, 0}, -1), {0.0, 1.0}) == 1.0);
    CHECK_THROWS_AS(mean_oscillation(c, {0.0, 0.0}), DomainError);
    for (FamilyTag t : {FamilyTag::all, FamilyTag::dyadic, FamilyTag::two_sided, FamilyTag::shifted})
        CHECK(bmo_norm(c, fam(t, {-4.0, 4.0})).value == 0.0);
}

TEST_CASE("clipped Heaviside") {
    const StepFunction H = StepFunction::indicator({0.0, 4.0}, 0);
    const GridInterval w{-4.0, 4.0};
    CHECK(bmo_norm(H, fam(FamilyTag::dyadic, w)).value == 0.0);
    CHECK(bmo_norm(H, fam(FamilyTag::two_sided, w)).value == 0.0);
    const NormReport all = bmo_norm(H, fam(FamilyTag::all, w));
    CHECK(all.value == 0.5);
    CHECK(all.witness.lo < 0.0);
    CHECK(all.witness.hi > 0.0);
    CHECK(all.witness == GridInterval{-1.0, 1.0});

    const NormReport a = a_functional(H, fam(FamilyTag::shifted, w));
    CHECK(a.value == 0.5);
    CHECK(a.k == 0);
    CHECK(lambda_norm(H, fam(FamilyTag::all, w)) == 0.5);
    CHECK(a0_functional(H, fam(FamilyTag::shifted, w)).value == 0.5);
    CHECK(ab_functional(H) == 0.5);
}

TEST_CASE("A_b") {
    CHECK(ab_functional(b_function()) == 0.5);
    CHECK(ab_functional(StepFunction::indicator({-1.0, 1.0}, 0)) == 0.0);
    CHECK(ab_functional(StepFunction::indicator({-4.0, 4.0}, -3, 2.0)) == 0.0);
}

TEST_CASE("family sweeps against a brute-force oracle") {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        const StepFunction f = random_step(rng, -1, -2.0, 2.0);
        const GridInterval w{-4.0, 4.0};
        const NormReport r = bmo_norm(f, fam(FamilyTag::all, w));
        CHECK(std::fabs(r.value - brute_all(f, w)) <= 1e-12);
        CHECK(std::fabs(oscillation_oracle(f, r.witness) - r.value) <= 1e-12);
    }
}

TEST_CASE("norm relations on random functions") {
    Rng rng(41);
    for (int t = 0; t < 200; ++t) {
        const int scale = static_cast<int>(rng.integer(-2, 0));
        const StepFunction f = random_step(rng, scale, -2.0, 2.0, 4.0);
        const IntervalFamily base = fam(FamilyTag::all, {-4.0, 4.0});
        IntervalFamily F = base;
        const NormReport all = bmo_norm(f, F);
        F.tag = FamilyTag::dyadic;
        const NormReport dy = bmo_norm(f, F);
        F.tag = FamilyTag::two_sided;
        const NormReport ts = bmo_norm(f, F);
        F.tag = FamilyTag::shifted;
        const NormReport sh = bmo_norm(f, F);
        const NormReport A = a_functional(f, base);
        const NormReport A0 = a0_functional(f, base);
        const double lam = lambda_norm(f, base);

        CHECK(dy.value <= ts.value);
        CHECK(ts.value <= all.value);
        CHECK(sh.value <= all.value);
        CHECK(A.value <= sh.value);
        CHECK(A0.value <= A.value);
        CHECK(lam <= all.value);
        CHECK(all.value <= 24.0 * lam);
        for (const NormReport* r : {&all, &dy, &ts, &sh})
            CHECK(mean_oscillation(f, r->witness) == r->value);
        const double mid = A.witness.lo + A.witness.length() / 2;
        const double diff = integrate(f, {A.witness.lo, mid}) - integrate(f, {mid, A.witness.hi});
        CHECK(std::fabs(A.value - std::fabs(diff) / A.witness.length()) <= 1e-12);
    }
}

TEST_CASE("A_0 on odd functions") {
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const StepFunction pos = random_step(rng, -2, 0.0, 2.0);
        const StepFunction f = reflect_odd(pos);
        double g = 0.0;
        for (int n = -2; n <= 1; ++n) g = std::max(g, std::fabs(integrate(pos, {0.0, pow2(n)})) / pow2(n));
        IntervalFamily F = fam(FamilyTag::shifted, {-4.0, 4.0});
        F.n_hi = 1;
        CHECK(std::fabs(a0_functional(f, F).value - g) <= 1e-12);
    }
}

TEST_CASE("window must cover the support") {
    CHECK_THROWS_AS(bmo_norm(StepFunction::indicator({0.0, 8.0}, 0), fam(FamilyTag::all, {-4.0, 4.0})),
                    PreconditionError);
    CHECK(default_window(b_function()) == GridInterval{-2.0, 2.0});
}

TEST_CASE("extension criteria") {
    const ExtensionReport z = extension_criteria(StepFunction::zero(0));
    CHECK(z.even_norm == 0.0);
    CHECK(z.odd_norm == 0.0);
    CHECK(z.g_value == 0.0);

    const ExtensionReport c = extension_criteria(StepFunction::indicator({0.0, 1.0}, 0), GridInterval{-4.0, 4.0});
    CHECK(c.even_norm == c.two_sided_norm);
    CHECK_FALSE(c.ratio_flag);
    CHECK(c.g_value == 1.0);
    CHECK_FALSE(c.odd_unbounded);

    CHECK_THROWS_AS(extension_criteria(b_function()), PreconditionError);

    const StepFunction lnx = restrict(log_abs_function(-2, 4), Side::positive);
    const ExtensionReport l = extension_criteria(lnx);
    CHECK(l.odd_unbounded);
    // Near the origin the averages of ln x dominate G; at the top scale G is
    // the average of ln on [0, 16), namely 4 ln 2 - 1.
    CHECK(l.g_scale == -2);
    CHECK(l.g_top == doctest::Approx(4.0 * std::numbers::ln2 - 1.0).epsilon(1e-12));
    // Intervals straddling the origin beat every one-sided interval, so the
    // even extension has a strictly larger norm here.
    CHECK(l.even_norm > l.two_sided_norm);
    CHECK(l.ratio_flag);
    CHECK(std::fabs(l.even_norm - brute_all(reflect_even(lnx), {-16.0, 16.0})) <= 1e-12);
}

TEST_CASE("logarithm constant") {
    const double k = kappa_ln(-5, 3);
    CHECK(k <= 2.0 / std::numbers::e);
    CHECK(k >= 0.73);
    CHECK(k > std::numbers::ln2);
}

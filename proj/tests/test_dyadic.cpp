#include <doctest.h>

#include <cmath>
#include <vector>

#include "dha/atoms.hpp"
#include "dha/errors.hpp"
#include "dha/random.hpp"
#include "dha/step_function.hpp"

using namespace dha;

namespace {

std::vector<double> vals(const StepFunction& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace

TEST_CASE("dyadic interval halves and nestedness") {
    const DyadicInterval I{2, -3};
    CHECK(I.length() == 4.0);
    CHECK(I.lo() == -12.0);
    CHECK(I.left_half() == DyadicInterval{1, -6});
    CHECK(I.right_half() == DyadicInterval{1, -5});
    CHECK(I.left_half().parent() == I);
    CHECK(I.right_half().parent() == I);

    // Any two dyadic intervals are disjoint or nested.
    std::vector<DyadicInterval> window;
    for (int n = -2; n <= 2; ++n)
        for (std::int64_t k = -6; k <= 6; ++k) window.push_back({n, k});
    for (const auto& a : window) {
        for (const auto& b : window) {
            const double lo = std::max(a.lo(), b.lo());
            const double hi = std::min(a.hi(), b.hi());
            const auto c = intersect(a, b);
            if (hi <= lo) {
                CHECK_FALSE(c.has_value());
            } else {
                REQUIRE(c.has_value());
                CHECK(c->lo() == lo);
                CHECK(c->hi() == hi);
                CHECK((*c == a || *c == b));
            }
        }
    }
}

TEST_CASE("as_dyadic and smallest_dyadic_cover") {
    CHECK(as_dyadic({4.0, 8.0}) == DyadicInterval{2, 1});
    CHECK_FALSE(as_dyadic({2.0, 6.0}).has_value());
    CHECK_FALSE(as_dyadic({0.0, 3.0}).has_value());
    CHECK(smallest_dyadic_cover({5.0, 6.0}) == DyadicInterval{0, 5});
    CHECK(smallest_dyadic_cover({1.0, 3.0}) == DyadicInterval{2, 0});
    CHECK(smallest_dyadic_cover({-3.0, -1.0}) == DyadicInterval{2, -1});
    CHECK_FALSE(smallest_dyadic_cover({-1.0, 1.0}).has_value());
}

TEST_CASE("haar functions") {
    const StepFunction h = haar({0, 0}, -1);
    CHECK(h.cell_scale() == -1);
    CHECK(h.lo() == 0.0);
    CHECK(vals(h) == std::vector<double>{1.0, -1.0});

    const StepFunction h2 = haar({1, -1}, 0);
    CHECK(h2.lo() == -2.0);
    CHECK(vals(h2) == std::vector<double>{0.5, -0.5});

    for (int n = -3; n <= 3; ++n) {
        for (std::int64_t k = -4; k <= 4; ++k) {
            const DyadicInterval I{n, k};
            const StepFunction f = haar(I, n - 3);
            CHECK(f.integral() == 0.0);
            CHECK(integrate(f, I.left_half().grid()) == 0.5);
            CHECK(validate_atom(f, I.grid()).ok);
        }
    }
    CHECK_THROWS_AS(haar({0, 0}, 0), ResolutionError);
}

TEST_CASE("special atoms") {
    const StepFunction b = special_atom(0, 0, 0);
    CHECK(b.lo() == -1.0);
    CHECK(vals(b) == std::vector<double>{0.5, -0.5});

    const StepFunction b12 = special_atom(1, 2, 1);
    CHECK(b12.lo() == 2.0);
    CHECK(b12.hi() == 6.0);
    CHECK(vals(b12) == std::vector<double>{0.25, -0.25});

    // Odd k gives multiples of dyadic atoms: b_{0,1} is the Haar function of [0,2).
    CHECK(same_function(special_atom(0, 1, -2), haar({1, 0}, -1)));

    for (int n = -3; n <= 3; ++n) {
        for (std::int64_t k = -4; k <= 4; ++k) {
            const StepFunction s = special_atom(n, k, n - 1);
            const GridInterval J{std::ldexp(double(k - 1), n), std::ldexp(double(k + 1), n)};
            CHECK(validate_atom(s, J).ok);
            CHECK(s.sup_abs() == std::ldexp(1.0, -(n + 1)));
        }
    }
    CHECK_THROWS_AS(special_atom(0, 0, 1), ResolutionError);
}

TEST_CASE("integrate") {
    const StepFunction b = b_function(-1);
    CHECK(integrate(b, {-1.0, 1.0}) == 0.0);
    CHECK(integrate(b, {0.0, 1.0}) == -0.5);
    CHECK(integrate(b, {-8.0, 8.0}) == 0.0);
    CHECK_THROWS_AS(integrate(b, {0.25, 1.0}), AlignmentError);
    CHECK(integrate_refining(b, {0.25, 1.0}) == -0.375);
    CHECK(integrate_refining(special_atom(2, 0, 2), {-1.0, 1.0}) == 0.0);

    // Compensated summation keeps the Haar cancellation far below 2^-40.
    const DyadicInterval I{3, 7};
    const StepFunction h = haar(I, -12);
    CHECK(std::fabs(integrate(h, I.grid())) <= std::ldexp(1.0, -40));
}

TEST_CASE("restrict partitions the line") {
    const StepFunction b = b_function(-1);
    const StepFunction pos = restrict(b, Side::positive);
    CHECK(same_function(pos, StepFunction::indicator({0.0, 1.0}, 0, -0.5)));
    CHECK(restrict(haar({0, 3}, -1), Side::negative).sup_abs() == 0.0);

    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const StepFunction f = random_step(rng, -2, -3.0, 5.0);
        CHECK(same_function(restrict(f, Side::positive) + restrict(f, Side::negative), f));
    }
}

TEST_CASE("even and odd reflection") {
    const StepFunction chi = StepFunction::indicator({0.0, 1.0}, 0);
    CHECK(same_function(reflect_even(chi), StepFunction::indicator({-1.0, 1.0}, 0)));
    CHECK(same_function(reflect_odd(chi), chi - StepFunction::indicator({-1.0, 0.0}, 0)));
    CHECK_THROWS_AS(reflect_even(b_function()), PreconditionError);

    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const StepFunction f = random_step(rng, -3, 0.0, 4.0);
        CHECK(reflect_odd(f).integral() == 0.0);
        const StepFunction e = reflect_even(f);
        for (double x : {0.1, 0.7, 2.3, 3.9}) CHECK(e(x) == e(-x));
    }
}

TEST_CASE("refinement invariance") {
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const StepFunction f = random_step(rng, -1, -4.0, 4.0);
        const int r = static_cast<int>(rng.integer(1, 3));
        const StepFunction g = f.refined(-1 - r);
        CHECK(same_function(f, g));
        CHECK(g.integral() == f.integral());
        CHECK(integrate(g, {-1.0, 2.0}) == integrate(f, {-1.0, 2.0}));
        CHECK(same_function(restrict(g, Side::positive), restrict(f, Side::positive)));
        CHECK(same_function(reflect_odd(restrict(g, Side::positive)),
                            reflect_odd(restrict(f, Side::positive))));
    }
    CHECK(same_function(haar({1, 0}, -4), haar({1, 0}, 0)));
    CHECK(same_function(special_atom(1, 1, -3), special_atom(1, 1, 1)));
}

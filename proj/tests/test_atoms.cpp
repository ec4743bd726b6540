#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dha/atoms.hpp"
#include "dha/counterexample.hpp"
#include "dha/errors.hpp"
#include "dha/random.hpp"

using namespace dha;

namespace {

std::vector<double> vals(const StepFunction& f) { return {f.values().begin(), f.values().end()}; }

// |I| times the L2 pairing of f with H_I, summed cell by cell at a common scale.
double haar_coefficient_oracle(const StepFunction& f, const DyadicInterval& I) {
    const StepFunction h = haar(I, std::min(f.cell_scale(), I.n - 1));
    const auto [a, b] = common_grid(f, h);
    double s = 0.0;
    for (std::int64_t i = std::min(a.cell_start(), b.cell_start());
         i < std::max(a.cell_end(), b.cell_end()); ++i)
        s += a.at_cell(i) * b.at_cell(i) * a.cell_length();
    return s * I.length();
}

}  // namespace

TEST_CASE("validate_atom") {
    CHECK(validate_atom(b_function(), {-1.0, 1.0}).ok);
    CHECK(validate_atom(haar({0, 0}, -1), {0.0, 1.0}).ok);

    const AtomReport tall = validate_atom(haar({0, 0}, -1), {0.0, 0.5});
    CHECK_FALSE(tall.ok);
    CHECK(tall.support_violation == 1.0);

    const AtomReport big = validate_atom(2.0 * haar({0, 0}, -1), {0.0, 1.0});
    CHECK_FALSE(big.ok);
    CHECK(big.size_violation == 1.0);

    const AtomReport mass = validate_atom(StepFunction::indicator({0.0, 1.0}, 0, 0.5), {0.0, 2.0});
    CHECK_FALSE(mass.ok);
    CHECK(mass.cancellation_violation == 0.5);
}

TEST_CASE("flavor names") {
    for (Flavor f : {Flavor::general, Flavor::dyadic, Flavor::two_sided, Flavor::special,
                     Flavor::special_origin})
        CHECK(flavor_from_string(to_string(f)) == f);
    CHECK(to_string(Flavor::two_sided) == "two-sided");
    CHECK_THROWS_AS(flavor_from_string("bogus"), ParseError);
}

TEST_CASE("split of the special atom b") {
    const SplitResult r = split_atom(Atom{b_function(-1), {-1.0, 1.0}});
    CHECK(r.n == 2);
    CHECK(r.k == 0);
    CHECK(r.c1 == 4.0);
    CHECK(r.c2 == 4.0);
    CHECK(r.c3 == 1.0);
    CHECK(r.a_left.shape(-3.0) == -1.0 / 32);
    CHECK(r.a_left.shape(-0.5) == 3.0 / 32);
    CHECK(r.a_right.shape(0.5) == -3.0 / 32);
    CHECK(r.a_right.shape(3.0) == 1.0 / 32);
    CHECK(r.a_left.defining == GridInterval{-4.0, 0.0});
    CHECK(r.a_right.defining == GridInterval{0.0, 4.0});
    CHECK(same_function(r.reconstruct(), b_function()));
}

TEST_CASE("split with no interior multiple") {
    // Atom on [0, 5): the whole support sits in the right block.
    const StepFunction a(0, 0, {0.1, -0.1, 0.05, -0.05, 0.0});
    const SplitResult r = split_atom(Atom{a, {0.0, 5.0}});
    CHECK(r.n == 3);
    CHECK(r.k == 0);
    CHECK(r.a_left.shape.sup_abs() == 0.0);
    CHECK(r.c3 == 0.0);
    CHECK(same_function(r.a_right.shape, 0.25 * a));
    CHECK(same_function(r.reconstruct(), a));

    // [5, 6) also has no interior multiple of 2^n.
    const SplitResult s = split_atom(Atom{haar({0, 5}, -1), {5.0, 6.0}});
    CHECK(s.c3 == 0.0);
    CHECK(s.a_left.shape.sup_abs() == 0.0);
    CHECK(same_function(s.reconstruct(), haar({0, 5}, -1)));
}

TEST_CASE("split_atom on random atoms") {
    Rng rng(2024);
    for (int t = 0; t < 300; ++t) {
        const int scale = static_cast<int>(rng.integer(-3, 0));
        const GridInterval I = random_interval(rng, scale, 40, -16.0, 16.0);
        const Atom a = random_atom(rng, I, scale);
        REQUIRE(validate_atom(a).ok);
        const SplitResult r = split_atom(a);
        CHECK(validate_atom(r.a_left).ok);
        CHECK(validate_atom(r.a_right).ok);
        CHECK(as_dyadic(r.a_left.defining).has_value());
        CHECK(as_dyadic(r.a_right.defining).has_value());
        CHECK(std::fabs(r.c3) <= 2.0);
        CHECK(max_difference(r.reconstruct(), a.shape) <= tolerance());
        CHECK(r.a_left.defining.hi == r.a_right.defining.lo);
    }
    CHECK_THROWS_AS(split_atom(Atom{b_function(), {-1.0, 1.0}}, ScaleWindow{3, 10}), RangeError);
    CHECK_THROWS_AS(split_atom(Atom{b_function(), {0.0, 1.0}}), PreconditionError);
}

TEST_CASE("haar_expand examples") {
    const HaarExpansion e = haar_expand(haar({0, 0}, -1), 2);
    CHECK(e.coefficients.size() == 1);
    CHECK(e.coefficients.at(DyadicInterval{0, 0}) == 1.0);
    CHECK(e.residual.sup_abs() == 0.0);

    // chi_[0,1) = H_[0,2) + H_[0,4) + chi_[0,4)/4.
    const HaarExpansion g = haar_expand(StepFunction::indicator({0.0, 1.0}, 0), 2);
    CHECK(g.coefficients.at(DyadicInterval{1, 0}) == 1.0);
    CHECK(g.coefficients.at(DyadicInterval{2, 0}) == 1.0);
    CHECK(g.residual(0.5) == 0.25);
    CHECK(g.residual(-0.5) == 0.0);
    CHECK(same_function(g.reconstruct(), StepFunction::indicator({0.0, 1.0}, 0)));
    CHECK_THROWS_AS(haar_expand(StepFunction::indicator({0.0, 8.0}, 0), 2), RangeError);
}

TEST_CASE("haar_expand against the pairing oracle") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const int scale = static_cast<int>(rng.integer(-3, -1));
        const StepFunction f = random_step(rng, scale, -4.0, 4.0);
        const HaarExpansion e = haar_expand(f, 2);
        CHECK(max_difference(e.reconstruct(), f) <= tolerance());
        for (int n = scale + 1; n <= 2; ++n) {
            const std::int64_t count = std::int64_t{1} << (2 - n);
            for (std::int64_t k = -count; k < count; ++k) {
                const DyadicInterval I{n, k};
                const auto it = e.coefficients.find(I);
                const double c = it == e.coefficients.end() ? 0.0 : it->second;
                CHECK(std::fabs(c - haar_coefficient_oracle(f, I)) <= tolerance());
            }
        }
    }
}

TEST_CASE("decompose flavors") {
    const StepFunction b = b_function();
    try {
        decompose(b, Flavor::dyadic);
        FAIL("expected infeasible");
    } catch (const InfeasibleError& e) {
        CHECK(e.obstruction() == -0.5);
    }
    CHECK_THROWS_AS(decompose(b, Flavor::two_sided), InfeasibleError);
    CHECK_THROWS_AS(decompose(b, Flavor::special), DomainError);

    const AtomicDecomposition g = decompose(b, Flavor::general);
    CHECK(g.cost() == 1.0);
    CHECK(same_function(g.reconstruct(), b));
    CHECK(h1_upper(b, Flavor::general) == 1.0);

    const StepFunction h = haar({2, -1}, -1);
    const AtomicDecomposition d = decompose(h, Flavor::dyadic);
    CHECK(d.flavor_consistent());
    CHECK(same_function(d.reconstruct(), h));
    CHECK(h1_upper(h, Flavor::dyadic) == 1.0);
}

TEST_CASE("decompose on random functions") {
    Rng rng(99);
    for (int t = 0; t < 40; ++t) {
        const StepFunction f = random_ha_function(rng, -2, 2);
        for (Flavor fl : {Flavor::general, Flavor::dyadic, Flavor::two_sided}) {
            const AtomicDecomposition d = decompose(f, fl);
            CHECK(d.flavor_consistent());
            for (const Term& term : d.terms) CHECK(validate_atom(term.atom).ok);
            CHECK(max_difference(d.reconstruct(), f) <= tolerance());
        }
        const double g = h1_upper(f, Flavor::general);
        const double s = h1_upper(f, Flavor::two_sided);
        const double y = h1_upper(f, Flavor::dyadic);
        CHECK(g <= s);
        CHECK(s <= y);
        CHECK(f.l1_norm() <= g + tolerance());
    }
}

TEST_CASE("h1_upper uses valid candidates and rejects bad ones") {
    const StepFunction h = haar({1, 0}, -1) - haar({1, 1}, -1);
    AtomicDecomposition cand;
    cand.flavor = Flavor::dyadic;
    cand.terms.push_back(Term{1.0, Atom{haar({1, 0}, -1), {0.0, 2.0}}});
    cand.terms.push_back(Term{-1.0, Atom{haar({1, 1}, -1), {2.0, 4.0}}});
    CHECK(h1_upper(h, Flavor::dyadic, std::span(&cand, 1)) <= 2.0);

    AtomicDecomposition wrong = cand;
    wrong.terms[1].lambda = 1.0;
    CHECK_THROWS_AS(h1_upper(h, Flavor::dyadic, std::span(&wrong, 1)), PreconditionError);
}

TEST_CASE("distance to the half-line space") {
    const DistanceResult r = distance_to_HA(b_function());
    CHECK(r.half_line_integral == -0.5);
    CHECK(r.obstruction == 0.5);
    CHECK(r.corrected.sup_abs() == 0.0);
    CHECK(r.correction_cost == 1.0);

    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const StepFunction f = random_ha_function(rng, -2, 1) + 0.75 * b_function();
        const DistanceResult d = distance_to_HA(f);
        CHECK(d.obstruction == 0.375);
        CHECK(positive_half_integral(d.corrected) == 0.0);
        CHECK_NOTHROW(decompose(d.corrected, Flavor::dyadic));
        CHECK(d.correction_cost <= 2.0 * d.obstruction + tolerance());
    }
}

TEST_CASE("symmetrize") {
    // Even atom: the fold is half the atom on the positive axis.
    const StepFunction even(0, -2, {0.25, -0.25, -0.25, 0.25});
    const Atom s = symmetrize_atom(Atom{even, {-2.0, 2.0}});
    CHECK(s.defining == GridInterval{0.0, 2.0});
    CHECK(same_function(s.shape, 0.5 * restrict(even, Side::positive)));
    CHECK(validate_atom(s).ok);

    AtomicDecomposition dec;
    dec.flavor = Flavor::general;
    dec.terms.push_back(Term{1.0, Atom{special_atom(0, 0, -1), {-1.0, 1.0}}});
    dec.terms.push_back(Term{-1.0, Atom{special_atom(1, 0, -1), {-2.0, 2.0}}});
    dec.terms.push_back(Term{0.5, Atom{haar({1, -1}, -1), {-2.0, 0.0}}});
    const StepFunction g = -0.5 * haar({1, 0}, -1);
    REQUIRE(same_function(dec.reconstruct(), g));

    const AtomicDecomposition out = symmetrize(g, dec);
    CHECK(out.flavor == Flavor::two_sided);
    REQUIRE(out.terms.size() == 1);
    CHECK(out.terms[0].lambda == 2.0);
    CHECK(same_function(out.terms[0].atom.shape, -0.25 * haar({1, 0}, -1)));
    CHECK(same_function(out.reconstruct(), g));
    CHECK(out.cost() <= 4.0 * dec.cost());

    CHECK_THROWS_AS(symmetrize(b_function(), decompose(b_function(), Flavor::general)),
                    PreconditionError);
}

TEST_CASE("counterexample structure") {
    const double ln2 = std::numbers::ln2;
    CHECK(spike_log_moment(1) == doctest::Approx(ln2 - 1.0).epsilon(1e-14));
    for (int n = 1; n <= 40; ++n)
        CHECK(spike_log_moment(n) == doctest::Approx(-n * ln2 + 2.0 * ln2 - 1.0).epsilon(1e-12));

    for (int N : {1, 4, 8, 16, 32, 64}) {
        const Counterexample c(N);
        double L = 0.0, H = 0.0;
        for (int n = 1; n <= N; ++n) {
            L += 1.0 / (double(n) * n);
            H += 1.0 / n;
        }
        CHECK(c.partial_constant() == doctest::Approx(L).epsilon(1e-15));
        const AtomicDecomposition d = c.decomposition();
        for (const Term& t : d.terms) CHECK(validate_atom(t.atom).ok);
        CHECK(d.cost() == doctest::Approx(6.0 * L).epsilon(1e-14));
        CHECK(c.decomposition_error() <= tolerance());
        CHECK(c.log_moment_signed() == doctest::Approx(ln2 * (H - 2.0 * L)).epsilon(1e-12));
        CHECK(c.spike_moment() == doctest::Approx(ln2 * H - 2.0 * ln2 * L + L).epsilon(1e-12));
        CHECK(c(-0.3) == -c(0.3));
        CHECK(c(1.0) == 0.0);
    }
}

TEST_CASE("materialized counterexample") {
    for (int N : {2, 5, 10}) {
        const Counterexample c(N);
        const StepFunction f = c.function();
        CHECK(f.integral() == 0.0);
        CHECK(std::fabs(positive_half_integral(f)) <= tolerance());
        for (double x : c.piece_midpoints()) CHECK(f(x) == c(x));
        CHECK(log_moment_signed(f) == doctest::Approx(c.log_moment_signed()).epsilon(1e-12));
        CHECK(max_difference(c.decomposition().reconstruct(), f) <= tolerance());
        CHECK(h1_upper(f, Flavor::general) <= 6.0 * c.partial_constant() + tolerance());
    }
    CHECK_THROWS_AS(Counterexample(30).function(), RangeError);
}

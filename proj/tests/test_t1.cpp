#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dha/errors.hpp"
#include "dha/random.hpp"
#include "dha/t1.hpp"

using namespace dha;

TEST_CASE("zero kernel") {
    const KernelOperator T = catalog_kernel("zero", -2, 2);
    CHECK(T.apply(b_function()).sup_abs() == 0.0);
    const T1Report r = bmo_conditions(T);
    CHECK(r.c_1d == 0.0);
    CHECK(r.c_2d == 0.0);
    CHECK(r.c_1s == 0.0);
    CHECK(r.c_2s == 0.0);
    CHECK(r.truncation_band == 0.0);
    CHECK(r.matrix_norm == 0.0);
}

TEST_CASE("apply is the matrix action") {
    const KernelOperator T = catalog_kernel("gauss", -2, 2);
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        const StepFunction f = random_step(rng, -2, -4.0, 4.0);
        const StepFunction g = random_step(rng, -1, -2.0, 3.0);
        const StepFunction s = T.apply(f + g);
        const StepFunction sep = T.apply(f) + T.apply(g);
        CHECK(max_difference(s, sep) <= 1e-13);

        // Cell i of Tf from the definition.
        const std::size_t i = static_cast<std::size_t>(rng.integer(0, 31));
        const double x = T.midpoint(i);
        double want = 0.0;
        for (std::size_t j = 0; j < T.size(); ++j)
            if (j != i) want += 0.25 * std::exp(-(x - T.midpoint(j)) * (x - T.midpoint(j))) * f(T.midpoint(j));
        CHECK(T.apply(f)(x) == doctest::Approx(want).epsilon(1e-13));

        // Transpose duality.
        CHECK(inner(T.apply(f), g) == doctest::Approx(inner(f, T.apply_transpose(g))).epsilon(1e-12));
        CHECK(max_difference(T.transpose().apply(g), T.apply_transpose(g)) <= 1e-14);
    }
    CHECK_THROWS_AS(T.apply(StepFunction::indicator({0.0, 1.0}, -3)), AlignmentError);
    CHECK_THROWS_AS(T.apply(StepFunction::indicator({0.0, 8.0}, 0)), PreconditionError);
}

TEST_CASE("Hilbert kernel") {
    const KernelOperator T = catalog_kernel("hilbert", -4, 3);
    const StepFunction chi = StepFunction::indicator({0.0, 1.0}, -4);
    const StepFunction Tf = T.apply(chi);
    for (double x : {-5.0, -2.0, -0.25, 1.25, 2.5, 6.0}) {
        const double xm = std::floor(x * 16.0) / 16.0 + 1.0 / 32.0;
        CHECK(Tf(x) == doctest::Approx(std::log(std::fabs(xm / (xm - 1.0)))).epsilon(0.05));
    }
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const StepFunction f = random_step(rng, -3, -4.0, 4.0);
        CHECK(std::fabs(inner(T.apply(f), f)) <= 1e-12);
    }
    CHECK(wbp(T).value == 0.0);
    CHECK(operator_two_norm(T) > 1.0);
    CHECK(std::isinf(bmo_conditions(T).truncation_band));
}

TEST_CASE("Gaussian kernel weak boundedness") {
    const KernelOperator T = catalog_kernel("gauss", -3, 3);
    const NormReport w = wbp(T);
    CHECK(w.value <= std::sqrt(std::numbers::pi) + 1e-9);
    CHECK(w.witness.length() >= 4.0);
    CHECK(w.value == doctest::Approx(std::fabs(T.quadratic_form(w.witness)) / w.witness.length()).epsilon(1e-12));
    CHECK(wbp(T, FamilyTag::dyadic).value <= w.value);
    CHECK(wbp(T, FamilyTag::two_sided).value <= w.value);
}

TEST_CASE("block-diagonal kernel bracket identity") {
    const KernelOperator T = catalog_kernel("blockdiag", -3, 3, 2024);
    const double c = wbp(T).value;
    for (int n = -3; n <= 3; ++n) {
        const BracketCheck br = bracket_identity(T, n);
        CHECK(br.support_preserving);
        CHECK(br.rel_err <= std::ldexp(1.0, -30));
    }
    const T1Report r = bmo_conditions(T);
    CHECK(r.c_2s <= 2.0 * c + 1e-12);
    CHECK(r.c_2s <= r.c_2d);
    CHECK(r.c_1s >= r.c_1d);
    CHECK(r.propagation_ok);
    CHECK(r.bmo_t1 <= 24.0 * (r.c_1d + r.c_2d));
    CHECK(r.truncation_band == 0.0);

    // A non-preserving kernel is detected.
    CHECK_FALSE(bracket_identity(catalog_kernel("gauss", -3, 3), 0).support_preserving);
}

TEST_CASE("even kernel routes through the even extension") {
    const KernelOperator T = catalog_kernel("gauss-even", -2, 3);
    const T1Report r = bmo_conditions(T);
    CHECK(r.t1_even);
    for (int i = 0; i < 32; ++i) CHECK(r.t1.at_cell(i) == doctest::Approx(r.t1.at_cell(-i - 1)).epsilon(1e-13));
    CHECK(r.even_route.even_norm >= r.even_route.two_sided_norm - 1e-12);
    CHECK(std::isfinite(r.truncation_band));

    CHECK_FALSE(bmo_conditions(catalog_kernel("blockdiag", -2, 2, 7)).t1_even);
    CHECK_THROWS_AS(catalog_kernel("nope", 0, 1), ParseError);
}

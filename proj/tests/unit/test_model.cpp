#include "doctest.h"

#include <cmath>

#include "fracgreen/errors.hpp"
#include "fracgreen/model.hpp"

using namespace fracgreen;

TEST_CASE("normalization constant: Gamma form against frozen references") {
    CHECK(normalization_constant(1, 0.6) == doctest::Approx(0.33354942991224811).epsilon(1e-12));
    CHECK(normalization_constant(1, 0.75) == doctest::Approx(0.29920671030107451).epsilon(1e-12));
    CHECK(normalization_constant(1, 0.9) == doctest::Approx(0.16490493881830272).epsilon(1e-12));
    CHECK(normalization_constant(2, 0.8) == doctest::Approx(0.15661172223255976).epsilon(1e-12));
}

TEST_CASE("normalization constant: Fourier quadrature route agrees with Gamma form") {
    for (double a : {0.55, 0.6, 0.75, 0.9, 0.95}) {
        const double g = normalization_constant(1, a);
        const double f = normalization_constant_fourier(1, a);
        CHECK(std::abs(f - g) / g < 1e-8);
    }
    for (double a : {0.6, 0.8}) {
        const double g = normalization_constant(2, a);
        const double f = normalization_constant_fourier(2, a);
        CHECK(std::abs(f - g) / g < 1e-6);
    }
}

TEST_CASE("normalization constant: (1-alpha)-scaled growth near alpha = 1") {
    const double r1 = normalization_constant(1, 0.9) / (1.0 - 0.9);
    const double r2 = normalization_constant(1, 0.99) / (1.0 - 0.99);
    CHECK(r1 > 0.0);
    CHECK(r2 > 0.0);
    CHECK(r2 / r1 < 2.0);
    CHECK(r1 / r2 < 2.0);
}

TEST_CASE("normalization constant: positive and continuous in alpha") {
    double prev = normalization_constant(1, 0.55);
    double max_jump = 0.0;
    for (double a = 0.56; a <= 0.951; a += 0.01) {
        const double cur = normalization_constant(1, a);
        CHECK(cur > 0.0);
        max_jump = std::max(max_jump, std::abs(cur - prev));
        prev = cur;
    }
    CHECK(max_jump < 0.02); // sampled modulus of continuity
}

TEST_CASE("normalization constant: rejects alpha outside (0,1)") {
    CHECK_THROWS_AS(normalization_constant(1, 0.0), ParameterError);
    CHECK_THROWS_AS(normalization_constant(1, 1.0), ParameterError);
    CHECK_THROWS_AS(normalization_constant(1, -0.3), ParameterError);
    CHECK_THROWS_AS(normalization_constant(3, 0.7), ParameterError);
}

TEST_CASE("p_star formula and monotonicity in alpha") {
    // dim 1: 1 / (2 - 2a); dim 2: 2 / (3 - 2a).
    CHECK(make_params(1, 0.6).p_star() == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(make_params(1, 0.75).p_star() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(make_params(2, 0.8).p_star() == doctest::Approx(2.0 / 1.4).epsilon(1e-14));
    double prev1 = 0.0, prev2 = 0.0;
    for (double a = 0.55; a < 0.99; a += 0.02) {
        FracParams p1{1, a, 1.0}, p2{2, a, 1.0};
        CHECK(p1.p_star() > prev1);
        CHECK(p2.p_star() > prev2);
        prev1 = p1.p_star();
        prev2 = p2.p_star();
    }
}

namespace {

ProblemSpec minimal_spec(double alpha, double p) {
    ProblemSpec s;
    s.params = make_params(1, alpha);
    s.grid = make_grid(1, 16);
    s.g.c = 0.1;
    s.g.p = p;
    s.g.eps = 0.0;
    s.g.f = make_field(s.grid, 0.0);
    s.sigma = 1.0;
    s.nu.support = Support::Interior;
    s.nu.atoms.push_back({{0.0, 0.0}, 1.0});
    s.mu.support = Support::Exterior;
    return s;
}

} // namespace

TEST_CASE("validate_problem: subcritical exponent gate") {
    // alpha = 0.6 gives p* = 1.25, so p = 1.5 must be rejected...
    CHECK_THROWS_AS(validate_problem(minimal_spec(0.6, 1.5)), ValidationError);
    // ...while alpha = 0.75 (p* = 2) accepts it.
    ProblemSpec ok = validate_problem(minimal_spec(0.75, 1.5));
    CHECK(ok.p_star == doctest::Approx(2.0));
}

TEST_CASE("validate_problem: measure support rules") {
    auto s = minimal_spec(0.75, 1.5);
    s.mu.atoms.push_back({{0.9, 0.0}, 1.0}); // inside the ball
    CHECK_THROWS_WITH_AS(validate_problem(s), doctest::Contains("exterior support"),
                         ValidationError);

    auto s2 = minimal_spec(0.75, 1.5);
    s2.nu.atoms.push_back({{0.3, 0.0}, -1.0});
    CHECK_THROWS_WITH_AS(validate_problem(s2), doctest::Contains("non-negative"),
                         ValidationError);

    auto s3 = minimal_spec(0.75, 1.5);
    s3.mu.atoms.push_back({{1.01, 0.0}, 1.0}); // closer than the declared separation
    CHECK_THROWS_AS(validate_problem(s3), ValidationError);
    s3.mu.separation = 0.005;
    CHECK_NOTHROW(validate_problem(s3));

    auto s4 = minimal_spec(0.75, 1.5);
    s4.mu.density = make_field(s4.grid, 1.0); // densities are interior-only
    CHECK_THROWS_WITH_AS(validate_problem(s4), doctest::Contains("density"),
                         ValidationError);

    auto s5 = minimal_spec(0.75, 1.5);
    s5.eta = RadonMeasure{};
    s5.eta->support = Support::Boundary;
    s5.eta->atoms.push_back({{0.7, 0.0}, 1.0}); // not on |x| = 1
    CHECK_THROWS_AS(validate_problem(s5), ValidationError);
}

TEST_CASE("validate_problem: alpha and c_norm consistency") {
    auto s = minimal_spec(0.75, 1.5);
    s.params.alpha = 0.4;
    CHECK_THROWS_AS(validate_problem(s), ValidationError);
    auto s2 = minimal_spec(0.75, 1.5);
    s2.params.c_norm *= 1.001;
    CHECK_THROWS_WITH_AS(validate_problem(s2), doctest::Contains("normalization"),
                         ValidationError);
}

TEST_CASE("grid geometry") {
    auto g = make_grid(1, 31);
    CHECK(g->h == doctest::Approx(2.0 / 32.0));
    CHECK(g->size() == 31);
    for (int i = 0; i < g->size(); ++i) {
        CHECK(g->dist[i] > 0.0);
        CHECK(g->dist[i] == doctest::Approx(1.0 - std::abs(g->x(i))));
    }
    CHECK(g->x(15) == doctest::Approx(0.0));

    auto g2 = make_grid(2, 15);
    CHECK(g2->dim == 2);
    for (int i = 0; i < g2->size(); ++i) {
        const double r = std::hypot(g2->nodes[i][0], g2->nodes[i][1]);
        CHECK(r < 1.0);
        CHECK(g2->dist[i] == doctest::Approx(1.0 - r));
    }
}

TEST_CASE("growth spec saturating form") {
    auto grid = make_grid(1, 16);
    GrowthSpec g;
    g.c = 2.0;
    g.p = 1.5;
    g.eps = 0.5;
    g.f = make_field(grid, [](Point p) { return p[0]; });
    const double s = 1.7;
    CHECK(g.eval(3, s) ==
          doctest::Approx(2.0 * std::pow(s, 1.5) + 0.5 * std::abs(grid->x(3))));
}

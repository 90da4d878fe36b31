#include <cmath>
#include <random>

#include <doctest.h>

#include "mxspline/integrate.hpp"
#include "mxspline/problems.hpp"
#include "support/test_util.hpp"

using namespace mxspline;

namespace {

// Five-point stencil derivative of the exact solution; accurate enough to
// check the registered data against the ODE at the 1e-10 level.
Matrix exact_derivative(const ProblemSpec& p, double x) {
    const double h = 1e-4;
    return (1.0 / (12.0 * h)) * (-p.exact(x + 2 * h) + 8.0 * p.exact(x + h) -
                                 8.0 * p.exact(x - h) + p.exact(x - 2 * h));
}

}  // namespace

TEST_CASE("registry lists exactly the built-in names") {
    const auto names = builtin_problem_names();
    REQUIRE(names.size() == 5);
    for (const auto& name : names) {
        CHECK(is_builtin_problem(name));
        const ProblemSpec p = builtin_problem(name);
        CHECK(p.name == name);
        CHECK(p.rows > 0);
        CHECK(p.lipschitz > 0.0);
        REQUIRE(static_cast<bool>(p.exact));
    }
    CHECK_FALSE(is_builtin_problem("nope"));
    CHECK_THROWS_AS(builtin_problem("nope"), ConfigError);
}

TEST_CASE("registered exact solutions satisfy their equations") {
    for (const auto& name : builtin_problem_names()) {
        const ProblemSpec p = builtin_problem(name);
        for (int i = 0; i < 50; ++i) {
            const double x = p.a + (p.b - p.a) * (i + 0.5) / 50.0;
            const Matrix residual = exact_derivative(p, x) - p.f(x, p.exact(x));
            CHECK(frobenius_norm(residual) <= 1e-10);
        }
    }
}

TEST_CASE("vector example: initial data") {
    const ProblemSpec p = guzman_problem();
    const Matrix slope = p.f(0.0, p.initial);
    CHECK(slope(0, 0) == doctest::Approx(1.0).epsilon(1e-15).scale(0.0));
    CHECK(slope(1, 0) == doctest::Approx(0.0));
    CHECK(std::abs(slope(1, 0)) <= 1e-16);
    CHECK(max_abs(p.exact(0.0) - p.initial) <= 1e-15);
    CHECK(p.lipschitz == 1.0);
}

TEST_CASE("vector example: analytic Jacobian blocks match finite differences") {
    const ProblemSpec p = guzman_problem();
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> xs(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = xs(rng);
        const Matrix y = testutil::random_matrix(rng, 2, 1, 3.0);
        const Matrix analytic = p.df_dvec_y(x, y);
        for (int m = 0; m < 2; ++m) {
            const double step = 1e-6 * (1.0 + std::abs(y(m, 0)));
            Matrix yp = y, ym = y;
            yp(m, 0) += step;
            ym(m, 0) -= step;
            const Matrix block = (1.0 / (2.0 * step)) * (p.f(x, yp) - p.f(x, ym));
            for (int i = 0; i < 2; ++i)
                CHECK(std::abs(analytic(m * 2 + i, 0) - block(i, 0)) <= 1e-6);
        }
    }
}

TEST_CASE("Sylvester example: initial data and coefficient bound") {
    const ProblemSpec p = sylvester_problem();
    const Matrix slope = p.f(0.0, p.initial);
    CHECK(max_abs(slope - Matrix::from_rows({{-1.0, 0.0}, {1.0, 0.0}})) <= 1e-15);
    CHECK(max_abs(p.exact(1.0) - Matrix::from_rows({{std::exp(-1.0), 0.0}, {1.0, 1.0}})) <=
          1e-15);
    CHECK(p.lipschitz == 2.0);

    // sup over [0,1] of ||A(x) + B(x)||_F; the basis for taking L = 2.
    double sup = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        sup = std::max(sup,
                       frobenius_norm(p.affine->left(x) + p.affine->right(x)));
    }
    CHECK(sup == doctest::Approx(1.69443).epsilon(1e-5).scale(0.0));
}

TEST_CASE("Sylvester example: closed-form second derivative matches the chain rule") {
    const ProblemSpec p = sylvester_problem();
    std::mt19937 rng(62);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_real_distribution<double> xs(0.0, 1.0);
        const double x = xs(rng);
        const Matrix y = testutil::random_matrix(rng, 2, 2, 2.0);
        const Matrix generic = second_derivative(p, x, y);
        const Matrix closed = sylvester_second_derivative(x, y);
        CHECK(frobenius_norm(generic - closed) <= 1e-9);
    }
}

TEST_CASE("Riccati example: initial data and admissible step") {
    const ProblemSpec p = riccati_problem();
    CHECK(max_abs(p.exact(0.0) - p.initial) == 0.0);
    // Slope of the exact solution at 0 equals the field there.
    const Matrix expect = Matrix::from_rows({{0.0, 1.0}, {0.0, 1.0}});
    CHECK(max_abs(p.f(0.0, p.initial) - expect) <= 1e-15);
    CHECK(3.0 / p.lipschitz == doctest::Approx(0.0543042).epsilon(1e-5).scale(0.0));
    CHECK(0.01 < 3.0 / p.lipschitz);
}

TEST_CASE("zero problem: spline error identically zero") {
    const ProblemSpec p = zero_problem();
    SolverConfig cfg;
    cfg.segments = 5;
    const auto result = integrate(p, cfg);
    for (const auto& row : error_report(result.spline, p.exact, 21))
        CHECK(row.max_error == 0.0);
}

TEST_CASE("scalar exponential: error level and convergence order") {
    const ProblemSpec p = scalar_exp_problem();
    SolverConfig cfg;
    cfg.step = 0.1;
    const auto result = integrate(p, cfg);
    double worst = 0.0;
    for (const auto& row : error_report(result.spline, p.exact, 101))
        worst = std::max(worst, row.max_error);
    CHECK(worst > 1e-7);
    CHECK(worst < 1e-5);

    const auto study = convergence_study(p, {0.1, 0.05, 0.025, 0.0125}, cfg);
    REQUIRE(study.fitted_order.has_value());
    CHECK(*study.fitted_order >= 3.7);
    CHECK(*study.fitted_order <= 4.3);
}

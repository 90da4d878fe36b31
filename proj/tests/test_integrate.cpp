#include <cmath>
#include <random>

#include <doctest.h>

#include "mxspline/integrate.hpp"
#include "mxspline/problems.hpp"
#include "support/test_util.hpp"

using namespace mxspline;

namespace {

SolverConfig config_with_step(double h) {
    SolverConfig cfg;
    cfg.step = h;
    return cfg;
}

SolverConfig config_with_segments(int n) {
    SolverConfig cfg;
    cfg.segments = n;
    return cfg;
}

}  // namespace

TEST_CASE("second derivative at the initial point: nonlinear vector system") {
    const ProblemSpec p = guzman_problem();
    const Matrix ypp = second_derivative(p, 0.0, p.initial);
    CHECK(std::abs(ypp(0, 0)) <= 1e-14);
    CHECK(std::abs(ypp(1, 0)) <= 1e-14);
}

TEST_CASE("second derivative at the initial point: Sylvester") {
    const ProblemSpec p = sylvester_problem();
    const Matrix ypp = second_derivative(p, 0.0, p.initial);
    const Matrix expect = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
    CHECK(max_abs(ypp - expect) <= 1e-13);
}

TEST_CASE("second derivative of a constant field vanishes") {
    ProblemSpec p;
    p.rows = p.cols = 2;
    p.a = 0.0;
    p.b = 1.0;
    p.initial = Matrix::identity(2);
    p.lipschitz = 1.0;
    const Matrix c = Matrix::from_rows({{3.0, -1.0}, {0.5, 2.0}});
    p.f = [c](double, const Matrix&) { return c; };
    // No analytic partials: exercises the finite-difference fallback.
    const Matrix ypp = second_derivative(p, 0.3, Matrix::identity(2));
    CHECK(max_abs(ypp) <= 1e-8);
}

TEST_CASE("second derivative matches differencing f along the exact solution") {
    for (const auto& name : {"guzman", "sylvester", "riccati", "scalar-exp"}) {
        const ProblemSpec p = builtin_problem(name);
        const double step = 1e-5;
        for (int i = 0; i < 20; ++i) {
            const double x = p.a + (p.b - p.a) * (i + 0.5) / 20.0;
            const Matrix y = p.exact(x);
            const Matrix lhs = second_derivative(p, x, y);
            const Matrix rhs = (1.0 / (2.0 * step)) *
                               (p.f(x + step, p.exact(x + step)) - p.f(x - step, p.exact(x - step)));
            CHECK(max_abs(lhs - rhs) <= 1e-5);
        }
    }
}

TEST_CASE("second derivative rejects misshapen user derivatives") {
    ProblemSpec p = scalar_exp_problem();
    p.df_dvec_y = [](double, const Matrix&) { return Matrix(3, 1); };
    CHECK_THROWS_AS(second_derivative(p, 0.0, p.initial), DimensionError);
    p = scalar_exp_problem();
    p.df_dx = [](double, const Matrix&) { return Matrix(2, 2); };
    CHECK_THROWS_AS(second_derivative(p, 0.0, p.initial), DimensionError);
}

TEST_CASE("fixed point: constant map returns the constant") {
    const Matrix c = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const auto r = fixed_point_solve([&](const Matrix&) { return c; }, Matrix(2, 2), 1e-13, 50);
    CHECK(max_abs(r.value - c) == 0.0);
    CHECK(r.iterations <= 2);
}

TEST_CASE("fixed point: linear contraction reaches zero") {
    std::mt19937 rng(41);
    const Matrix start = testutil::random_matrix(rng, 2, 2, 5.0);
    const auto r =
        fixed_point_solve([](const Matrix& t) { return 0.5 * t; }, start, 1e-13, 200);
    CHECK(frobenius_norm(r.value) <= 1e-12);
}

TEST_CASE("fixed point: iteration budget exceeded reports the residual") {
    const Matrix c = Matrix::from_rows({{1.0}});
    const auto expanding = [&](const Matrix& t) { return 2.0 * t + c; };
    try {
        fixed_point_solve(expanding, Matrix(1, 1), 1e-13, 20);
        FAIL("expected non-convergence");
    } catch (const ConvergenceError& e) {
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("segment map: zero field gives the zero map") {
    const ProblemSpec p = zero_problem();
    SegmentState state{0.0, p.initial, Matrix(2, 2), Matrix(2, 2)};
    const auto g = segment_map(p, state, 0.25);
    std::mt19937 rng(42);
    for (int i = 0; i < 5; ++i)
        CHECK(max_abs(g(testutil::random_matrix(rng, 2, 2, 3.0))) == 0.0);
}

TEST_CASE("segment map: affine problems shift linearly in T") {
    // g(T) - g(0) = (h/3)(A(x_right) T + T B(x_right)) for the Sylvester field.
    const ProblemSpec p = sylvester_problem();
    const double h = 0.1;
    SegmentState state{0.0, p.initial, p.f(0.0, p.initial),
                       second_derivative(p, 0.0, p.initial)};
    const auto g = segment_map(p, state, h);
    const Matrix g0 = g(Matrix(2, 2));
    const Matrix a_right = p.affine->left(h);
    const Matrix b_right = p.affine->right(h);
    std::mt19937 rng(43);
    for (int i = 0; i < 20; ++i) {
        const Matrix t = testutil::random_matrix(rng, 2, 2, 2.0);
        const Matrix expect = (h / 3.0) * (a_right * t + t * b_right);
        CHECK(max_abs(g(t) - g0 - expect) <= 1e-12);
    }
}

TEST_CASE("segment map contracts at rate h*L/3") {
    struct Case {
        ProblemSpec p;
        double h;
    };
    const Case cases[] = {{guzman_problem(), 0.1},
                          {sylvester_problem(), 0.1},
                          {riccati_problem(), 0.01}};
    std::mt19937 rng(44);
    for (const auto& c : cases) {
        SegmentState state{c.p.a, c.p.initial, c.p.f(c.p.a, c.p.initial),
                           second_derivative(c.p, c.p.a, c.p.initial)};
        const auto g = segment_map(c.p, state, c.h);
        const double bound = c.h * c.p.lipschitz / 3.0 + 1e-9;
        for (int i = 0; i < 100; ++i) {
            const Matrix t1 = testutil::random_matrix(rng, c.p.rows, c.p.cols, 2.0);
            const Matrix t2 = testutil::random_matrix(rng, c.p.rows, c.p.cols, 2.0);
            const double dt = frobenius_norm(t1 - t2);
            if (dt == 0.0) continue;
            CHECK(frobenius_norm(g(t1) - g(t2)) / dt <= bound);
        }
    }
}

TEST_CASE("direct affine solve: decoupled case returns g(0)") {
    ProblemSpec p;
    p.rows = p.cols = 2;
    p.a = 0.0;
    p.b = 1.0;
    p.initial = Matrix::identity(2);
    p.lipschitz = 1.0;
    const Matrix forcing = Matrix::from_rows({{1.0, 2.0}, {-1.0, 0.5}});
    auto zero = [](double) { return Matrix(2, 2); };
    p.f = [forcing](double, const Matrix&) { return forcing; };
    p.affine = AffineStructure{zero, zero, [forcing](double) { return forcing; }};
    SegmentState state{0.0, p.initial, p.f(0.0, p.initial), Matrix(2, 2)};
    const auto g = segment_map(p, state, 0.2);
    const Matrix direct = solve_segment_direct_affine(p, state, 0.2);
    CHECK(max_abs(direct - g(Matrix(2, 2))) <= 1e-13);
}

TEST_CASE("direct affine solve matches the printed first Sylvester coefficient") {
    const ProblemSpec p = sylvester_problem();
    SegmentState state{0.0, p.initial, p.f(0.0, p.initial),
                       second_derivative(p, 0.0, p.initial)};
    const Matrix cubic = solve_segment_direct_affine(p, state, 0.1);
    CHECK(cubic(0, 0) / 6.0 == doctest::Approx(-0.1612).epsilon(1e-3).scale(0.0));
}

TEST_CASE("direct affine and fixed point agree on every Sylvester segment") {
    const ProblemSpec p = sylvester_problem();
    SolverConfig direct = config_with_step(0.1);
    direct.mode = SolveMode::DirectAffine;
    SolverConfig fixed = config_with_step(0.1);
    fixed.mode = SolveMode::FixedPoint;
    const auto rd = integrate(p, direct);
    const auto rf = integrate(p, fixed);
    REQUIRE(rd.spline.segment_count() == rf.spline.segment_count());
    for (int k = 0; k < rd.spline.segment_count(); ++k) {
        const Matrix ad = 6.0 * rd.spline.segment(k).c3;
        const Matrix af = 6.0 * rf.spline.segment(k).c3;
        CHECK(frobenius_norm(ad - af) <= 1e-11);
    }
}

TEST_CASE("integrate: zero field reproduces the initial value exactly") {
    const ProblemSpec p = zero_problem();
    const auto result = integrate(p, config_with_segments(5));
    const auto report = error_report(result.spline, p.exact, 41);
    for (const auto& row : report) CHECK(row.max_error == 0.0);
    CHECK(result.mode_used == SolveMode::FixedPoint);
}

TEST_CASE("integrate: spline starts bit-exactly at the initial value") {
    for (const auto& name : {"guzman", "sylvester", "scalar-exp"}) {
        const ProblemSpec p = builtin_problem(name);
        const auto result = integrate(p, config_with_step(0.1));
        CHECK(max_abs(result.spline.eval(p.a, 0) - p.initial) == 0.0);
        CHECK(max_abs(result.spline.eval(p.a, 1) - p.f(p.a, p.initial)) == 0.0);
    }
}

TEST_CASE("integrate: first-interval cubic coefficient of the vector example") {
    const ProblemSpec p = guzman_problem();
    const auto result = integrate(p, config_with_step(0.1));
    CHECK(result.spline.segment(0).c3(0, 0) == doctest::Approx(0.177917).epsilon(1e-5).scale(0.0));
    CHECK(result.fd_fallback_used == false);
}

TEST_CASE("integrate: reference error levels for the vector example") {
    const ProblemSpec p = guzman_problem();
    const auto result = integrate(p, config_with_step(0.1));
    const auto report = error_report(result.spline, p.exact, 101);
    REQUIRE(report.size() == 10);
    CHECK(report.front().max_error == doctest::Approx(2.83337e-6).epsilon(0.05).scale(0.0));
    CHECK(report.back().max_error == doctest::Approx(3.37764e-6).epsilon(0.05).scale(0.0));
}

TEST_CASE("integrate: last vector-example segment in the global basis") {
    // Reference row for [0.9, 1.0]: 1.89829 + 1.41574 x - 0.627395 x^2 + 0.571954 x^3.
    const ProblemSpec p = guzman_problem();
    const auto result = integrate(p, config_with_step(0.1));
    const auto g = global_coefficients(result.spline.segment(9));
    CHECK(g[0](0, 0) == doctest::Approx(1.89829).epsilon(1e-5).scale(0.0));
    CHECK(g[1](0, 0) == doctest::Approx(1.41574).epsilon(1e-5).scale(0.0));
    CHECK(g[2](0, 0) == doctest::Approx(-0.627395).epsilon(1e-5).scale(0.0));
    CHECK(g[3](0, 0) == doctest::Approx(0.571954).epsilon(1e-5).scale(0.0));
}

TEST_CASE("integrate: reference error levels for the Riccati example") {
    const ProblemSpec p = riccati_problem();
    const auto result = integrate(p, config_with_step(0.01));
    CHECK(result.fd_fallback_used == true);
    const auto report = error_report(result.spline, p.exact, 101);
    REQUIRE(report.size() == 10);
    CHECK(report.front().max_error == doctest::Approx(1.39903e-10).epsilon(0.10).scale(0.0));
    CHECK(report.back().max_error == doctest::Approx(1.48391e-10).epsilon(0.10).scale(0.0));
}

TEST_CASE("integrate: per-segment fixed-point residuals meet the tolerance") {
    for (const auto& name : {"guzman", "sylvester", "riccati"}) {
        const ProblemSpec p = builtin_problem(name);
        SolverConfig cfg = config_with_step(name == std::string("riccati") ? 0.01 : 0.1);
        cfg.mode = SolveMode::FixedPoint;
        const auto result = integrate(p, cfg);
        for (int k = 0; k < result.spline.segment_count(); ++k) {
            const SplineSegment& seg = result.spline.segment(k);
            SegmentState state{seg.x_left, seg.c0, seg.c1, 2.0 * seg.c2};
            const auto g = segment_map(p, state, seg.h);
            const Matrix a_k = 6.0 * seg.c3;
            CHECK(frobenius_norm(a_k - g(a_k)) <=
                  cfg.fp_tol * (1.0 + frobenius_norm(a_k)));
        }
    }
}

TEST_CASE("integrate: C2 continuity and collocation at the knots") {
    for (const auto& name : {"guzman", "sylvester", "riccati"}) {
        const ProblemSpec p = builtin_problem(name);
        SolverConfig cfg = config_with_step(name == std::string("riccati") ? 0.01 : 0.1);
        const auto result = integrate(p, cfg);
        const auto mismatch = knot_mismatch(result.spline);
        CHECK(mismatch.value <= 1e-9);
        CHECK(mismatch.first <= 1e-9);
        CHECK(mismatch.second <= 1e-9);
        for (int k = 0; k < result.spline.segment_count(); ++k) {
            const SplineSegment& seg = result.spline.segment(k);
            const double x_right = seg.x_left + seg.h;
            const double resid =
                frobenius_norm(seg.at(seg.h, 1) - p.f(x_right, seg.at(seg.h, 0)));
            CHECK(resid <= 10.0 * cfg.fp_tol);
        }
    }
}

TEST_CASE("integrate: step condition is enforced unless overridden") {
    const ProblemSpec riccati = riccati_problem();
    CHECK_THROWS_AS(integrate(riccati, config_with_step(0.1)), StepConditionError);

    ProblemSpec conservative = scalar_exp_problem();
    conservative.lipschitz = 50.0;  // overly pessimistic constant
    CHECK_THROWS_AS(integrate(conservative, config_with_step(0.1)), StepConditionError);
    SolverConfig forced = config_with_step(0.1);
    forced.override_step_condition = true;
    const auto result = integrate(conservative, forced);
    const auto report = error_report(result.spline, conservative.exact, 101);
    CHECK(report.back().max_error <= 1e-5);
}

TEST_CASE("integrate: propagates the failing segment index") {
    SolverConfig cfg = config_with_segments(1);
    cfg.fp_max_iter = 2;
    cfg.fp_tol = 1e-15;
    try {
        integrate(scalar_exp_problem(), cfg);
        FAIL("expected non-convergence");
    } catch (const ConvergenceError& e) {
        CHECK(e.segment == 0);
    }
}

TEST_CASE("error report of a spline against itself is zero") {
    const ProblemSpec p = guzman_problem();
    const auto result = integrate(p, config_with_step(0.1));
    const MatrixSpline& s = result.spline;
    const auto report = error_report(s, [&s](double x) { return s.eval(x); }, 51);
    // Segment-boundary samples may land one ulp across the knot; anything
    // beyond rounding noise is a real discrepancy.
    for (const auto& row : report) CHECK(row.max_error <= 1e-15);
}

TEST_CASE("spline endpoint agrees with a fine Runge-Kutta reference") {
    struct Case {
        const char* name;
        double h;
    };
    for (const auto& c : {Case{"guzman", 0.1}, Case{"sylvester", 0.1}, Case{"riccati", 0.01},
                          Case{"zero", 0.2}, Case{"scalar-exp", 0.1}}) {
        const ProblemSpec p = builtin_problem(c.name);
        const auto result = integrate(p, config_with_step(c.h));
        double observed = 0.0;
        for (const auto& row : error_report(result.spline, p.exact, 101))
            observed = std::max(observed, row.max_error);
        const int steps = result.spline.segment_count() * 100;
        const Matrix reference = testutil::rk4_reference(p.f, p.a, p.b, p.initial, steps);
        const double gap = frobenius_norm(result.spline.eval(p.b) - reference);
        CHECK(gap <= 10.0 * observed + 1e-15);
    }
}

TEST_CASE("convergence study: quartic order for the vector example") {
    const ProblemSpec p = guzman_problem();
    const auto study =
        convergence_study(p, {0.1, 0.05, 0.025, 0.0125}, config_with_step(0.1));
    REQUIRE(study.entries.size() == 4);
    REQUIRE(study.fitted_order.has_value());
    CHECK(*study.fitted_order >= 3.7);
    CHECK(*study.fitted_order <= 4.3);
    for (std::size_t i = 0; i + 1 < study.entries.size(); ++i) {
        const double ratio = study.entries[i].max_error / study.entries[i + 1].max_error;
        CHECK(ratio >= 12.0);
        CHECK(ratio <= 20.0);
    }
}

TEST_CASE("convergence study: zero problem reports a degenerate fit") {
    const auto study = convergence_study(zero_problem(), {0.25, 0.125}, config_with_step(0.25));
    CHECK(study.degenerate);
    CHECK_FALSE(study.fitted_order.has_value());
}

TEST_CASE("segment count resolution") {
    const ProblemSpec p = guzman_problem();  // [0, 1]
    CHECK(resolve_segment_count(p, config_with_step(0.1)) == 10);
    CHECK(resolve_segment_count(p, config_with_step(0.11)) == 9);
    CHECK(resolve_segment_count(p, config_with_segments(7)) == 7);
    SolverConfig both = config_with_step(0.1);
    both.segments = 10;
    CHECK_THROWS_AS(resolve_segment_count(p, both), ConfigError);
    CHECK_THROWS_AS(resolve_segment_count(p, SolverConfig{}), ConfigError);
}

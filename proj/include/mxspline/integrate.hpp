#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mxspline/matrix.hpp"
#include "mxspline/spline.hpp"

namespace mxspline {

// f(x, Y) = P(x) Y + Y Q(x) + R(x). When a problem declares this structure
// the per-segment equation is linear in the unknown cubic coefficient and
// can be solved directly instead of by fixed-point iteration.
struct AffineStructure {
    std::function<Matrix(double)> left;     // P(x)
    std::function<Matrix(double)> right;    // Q(x)
    std::function<Matrix(double)> forcing;  // R(x)
};

// An initial value problem Y'(x) = f(x, Y(x)), Y(a) = initial, with the
// metadata the solver needs. df_dx and df_dvec_y may be empty; finite
// differences stand in for them when computing Y''(a).
//
// df_dvec_y layout: the rows*cols blocks d f / d y_m stacked vertically in
// column-major entry order of Y, giving a (rows*rows*cols) x cols matrix.
struct ProblemSpec {
    std::string name;
    int rows = 0, cols = 0;
    double a = 0.0, b = 1.0;
    Matrix initial;
    double lipschitz = 0.0;
    std::function<Matrix(double, const Matrix&)> f;
    std::function<Matrix(double, const Matrix&)> df_dx;
    std::function<Matrix(double, const Matrix&)> df_dvec_y;
    std::function<Matrix(double)> exact;
    std::optional<AffineStructure> affine;
};

enum class SolveMode { Auto, FixedPoint, DirectAffine };

struct SolverConfig {
    std::optional<int> segments;  // n
    std::optional<double> step;   // h; n derived as the nearest integer
    double fp_tol = 1e-13;
    int fp_max_iter = 200;
    SolveMode mode = SolveMode::Auto;
    int samples_per_interval = 101;
    bool override_step_condition = false;
};

// Number of segments the configuration resolves to for this problem.
// Exactly one of segments/step must be set.
int resolve_segment_count(const ProblemSpec& p, const SolverConfig& cfg);

// Y''(x) from the chain rule for the composite x -> f(x, Y(x)):
//   Y'' = df/dx + ([vec f]^T (x) I_rows) * df/dvecY,
// where the second term contracts the stacked per-entry blocks against the
// entries of vec f. Falls back to centered finite differences for either
// partial the problem does not supply.
Matrix second_derivative(const ProblemSpec& p, double x, const Matrix& y);

struct FixedPointResult {
    Matrix value;
    int iterations = 0;
};

// Iterates T <- g(T) until ||g(T) - T||_F <= tol * (1 + ||g(T)||_F).
// Throws ConvergenceError with the last residual when max_iter is reached;
// for segment maps this signals that h is too large relative to 3/L.
FixedPointResult fixed_point_solve(const std::function<Matrix(const Matrix&)>& g,
                                   const Matrix& start, double tol, int max_iter);

// Taylor data of the running spline at the left knot of a segment.
struct SegmentState {
    double x = 0.0;  // left knot
    Matrix value;    // S(x)
    Matrix d1;       // S'(x)
    Matrix d2;       // S''(x)
};

// The map whose fixed point is the segment's cubic coefficient:
//   g(T) = (2/h^2) [ f(x+h, S + S' h + S'' h^2/2 + T h^3/6) - S' - S'' h ].
std::function<Matrix(const Matrix&)> segment_map(const ProblemSpec& p, const SegmentState& state,
                                                 double h);

// Direct solve of the same equation for affine problems: the unknown enters
// linearly, so T = g(0) + (h/3)(P(x+h) T + T Q(x+h)) becomes one Sylvester
// equation. Throws when the problem has no affine structure.
Matrix solve_segment_direct_affine(const ProblemSpec& p, const SegmentState& state, double h);

struct IntegrationResult {
    MatrixSpline spline;
    std::vector<int> fp_iterations;  // per segment; 1 for direct solves
    SolveMode mode_used = SolveMode::FixedPoint;
    bool fd_fallback_used = false;   // Y''(a) used finite differences
};

// Marches over the partition building one cubic segment at a time: segment 0
// from (Y_a, f(a, Y_a), Y''(a)), every later segment from the Taylor data of
// its predecessor at the shared knot. Enforces h*L/3 < 1 up front unless the
// config overrides it.
IntegrationResult integrate(const ProblemSpec& p, const SolverConfig& cfg);

struct IntervalError {
    double x_left = 0.0;
    double x_right = 0.0;
    double max_error = 0.0;  // max Frobenius distance to exact on the sample grid
};

// Per-segment maximum of ||S(x) - exact(x)||_F over a closed uniform grid of
// samples_per_interval points.
std::vector<IntervalError> error_report(const MatrixSpline& s,
                                        const std::function<Matrix(double)>& exact,
                                        int samples_per_interval);

struct ConvergenceEntry {
    double h = 0.0;
    int n = 0;
    double max_error = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceEntry> entries;
    std::optional<double> fitted_order;  // empty when the fit is degenerate
    bool degenerate = false;             // errors at rounding level, no slope
};

// Integrates at every requested step and fits the log-log slope of max error
// against h by least squares.
ConvergenceStudy convergence_study(const ProblemSpec& p, const std::vector<double>& steps,
                                   const SolverConfig& cfg);

}  // namespace mxspline

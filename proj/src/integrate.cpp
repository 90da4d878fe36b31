#include "mxspline/integrate.hpp"

#include <cmath>
#include <utility>

namespace mxspline {

int resolve_segment_count(const ProblemSpec& p, const SolverConfig& cfg) {
    if (cfg.segments.has_value() == cfg.step.has_value())
        throw ConfigError("exactly one of n and h must be given");
    if (cfg.segments) {
        if (*cfg.segments < 1) throw ConfigError("n must be a positive integer");
        return *cfg.segments;
    }
    if (!(*cfg.step > 0.0)) throw ConfigError("h must be positive");
    const int n = std::max(1, static_cast<int>(std::lround((p.b - p.a) / *cfg.step)));
    return n;
}

namespace {

Matrix fd_df_dx(const ProblemSpec& p, double x, const Matrix& y) {
    const double step = 1e-6 * (1.0 + std::abs(x));
    return (1.0 / (2.0 * step)) * (p.f(x + step, y) - p.f(x - step, y));
}

// Contraction of the stacked blocks d f / d y_m against vec f, i.e. the
// second term of the chain-rule expression for Y''. Works either from the
// supplied analytic blocks or from per-entry centered differences.
Matrix contract_field_jacobian(const ProblemSpec& p, double x, const Matrix& y,
                               const Matrix& field) {
    const Matrix vf = vec(field);
    Matrix acc(p.rows, p.cols);
    if (p.df_dvec_y) {
        const Matrix stacked = p.df_dvec_y(x, y);
        if (stacked.rows() != p.rows * p.rows * p.cols || stacked.cols() != p.cols)
            throw DimensionError("df_dvec_y must be (rows*rows*cols) x cols");
        for (int m = 0; m < p.rows * p.cols; ++m)
            for (int i = 0; i < p.rows; ++i)
                for (int j = 0; j < p.cols; ++j)
                    acc(i, j) += vf(m, 0) * stacked(m * p.rows + i, j);
        return acc;
    }
    // Finite-difference fallback, entry by entry in vec order.
    int m = 0;
    for (int j = 0; j < p.cols; ++j)
        for (int i = 0; i < p.rows; ++i, ++m) {
            const double step = 1e-6 * (1.0 + std::abs(y(i, j)));
            Matrix yp = y, ym = y;
            yp(i, j) += step;
            ym(i, j) -= step;
            acc += (vf(m, 0) / (2.0 * step)) * (p.f(x, yp) - p.f(x, ym));
        }
    return acc;
}

}  // namespace

Matrix second_derivative(const ProblemSpec& p, double x, const Matrix& y) {
    const Matrix field = p.f(x, y);
    if (field.rows() != p.rows || field.cols() != p.cols)
        throw DimensionError("f output dims do not match problem dims");
    Matrix dx = p.df_dx ? p.df_dx(x, y) : fd_df_dx(p, x, y);
    if (!dx.same_shape(field)) throw DimensionError("df_dx dims do not match f");
    return dx + contract_field_jacobian(p, x, y, field);
}

FixedPointResult fixed_point_solve(const std::function<Matrix(const Matrix&)>& g,
                                   const Matrix& start, double tol, int max_iter) {
    if (!(tol > 0.0)) throw ConfigError("fixed-point tolerance must be positive");
    Matrix t = start;
    double residual = 0.0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        Matrix next = g(t);
        residual = frobenius_norm(next - t);
        if (residual <= tol * (1.0 + frobenius_norm(next)))
            return FixedPointResult{std::move(next), iter};
        t = std::move(next);
    }
    throw ConvergenceError("fixed-point iteration did not converge in " +
                               std::to_string(max_iter) + " iterations (last residual " +
                               std::to_string(residual) + "); h may exceed 3/L",
                           residual);
}

std::function<Matrix(const Matrix&)> segment_map(const ProblemSpec& p, const SegmentState& state,
                                                 double h) {
    const double x_right = state.x + h;
    const Matrix base = state.value + h * state.d1 + (0.5 * h * h) * state.d2;
    const Matrix offset = state.d1 + h * state.d2;
    const double cubic_weight = h * h * h / 6.0;
    const double scale = 2.0 / (h * h);
    return [f = p.f, x_right, base, offset, cubic_weight, scale](const Matrix& t) {
        return scale * (f(x_right, base + cubic_weight * t) - offset);
    };
}

Matrix solve_segment_direct_affine(const ProblemSpec& p, const SegmentState& state, double h) {
    if (!p.affine) throw ConfigError("direct-affine mode requires an affine problem");
    const double x_right = state.x + h;
    const auto g = segment_map(p, state, h);
    const Matrix rhs = g(Matrix(p.rows, p.cols));
    // T = g(0) + (h/3)(P T + T Q)  <=>  (I/2 - (h/3)P) T + T (I/2 - (h/3)Q) = g(0).
    const double w = h / 3.0;
    const Matrix half_p = 0.5 * Matrix::identity(p.rows) - w * p.affine->left(x_right);
    const Matrix half_q = 0.5 * Matrix::identity(p.cols) - w * p.affine->right(x_right);
    try {
        return solve_sylvester(half_p, half_q, rhs);
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(std::string(e.what()) +
                                  "; try a smaller step so the segment equation stays regular");
    }
}

IntegrationResult integrate(const ProblemSpec& p, const SolverConfig& cfg) {
    const int n = resolve_segment_count(p, cfg);
    const double h = (p.b - p.a) / n;
    if (!cfg.override_step_condition && !(h * p.lipschitz / 3.0 < 1.0))
        throw StepConditionError("h exceeds 3/L: h = " + std::to_string(h) +
                                 ", 3/L = " + std::to_string(3.0 / p.lipschitz));
    if (!p.initial.same_shape(Matrix(p.rows, p.cols)))
        throw DimensionError("initial value dims do not match problem dims");

    SolveMode mode = cfg.mode;
    if (mode == SolveMode::Auto)
        mode = p.affine ? SolveMode::DirectAffine : SolveMode::FixedPoint;
    if (mode == SolveMode::DirectAffine && !p.affine)
        throw ConfigError("direct-affine mode requires an affine problem");

    SegmentState state{p.a, p.initial, p.f(p.a, p.initial), second_derivative(p, p.a, p.initial)};
    std::vector<SplineSegment> segments;
    std::vector<int> iterations;
    segments.reserve(static_cast<std::size_t>(n));
    iterations.reserve(static_cast<std::size_t>(n));

    Matrix warm_start(p.rows, p.cols);  // zero for segment 0, A_{k-1} after
    for (int k = 0; k < n; ++k) {
        Matrix cubic;  // A_k
        if (mode == SolveMode::DirectAffine) {
            cubic = solve_segment_direct_affine(p, state, h);
            iterations.push_back(1);
        } else {
            const auto g = segment_map(p, state, h);
            FixedPointResult fp;
            try {
                fp = fixed_point_solve(g, warm_start, cfg.fp_tol, cfg.fp_max_iter);
            } catch (const ConvergenceError& e) {
                throw ConvergenceError("segment " + std::to_string(k) + ": " + e.what(),
                                       e.residual, k);
            }
            cubic = std::move(fp.value);
            iterations.push_back(fp.iterations);
        }

        segments.push_back(
            SplineSegment{state.x, h, state.value, state.d1, 0.5 * state.d2, (1.0 / 6.0) * cubic});
        warm_start = cubic;

        // Taylor data of this segment at its right knot seeds the next one.
        const SplineSegment& seg = segments.back();
        state = SegmentState{p.a + (k + 1) * h, seg.at(h, 0), seg.at(h, 1), seg.at(h, 2)};
    }
    return IntegrationResult{MatrixSpline(p.a, p.b, std::move(segments)), std::move(iterations),
                             mode, !(p.df_dx && p.df_dvec_y)};
}

std::vector<IntervalError> error_report(const MatrixSpline& s,
                                        const std::function<Matrix(double)>& exact,
                                        int samples_per_interval) {
    if (samples_per_interval < 2) throw ConfigError("samples_per_interval must be at least 2");
    std::vector<IntervalError> report;
    report.reserve(static_cast<std::size_t>(s.segment_count()));
    for (int k = 0; k < s.segment_count(); ++k) {
        const SplineSegment& seg = s.segment(k);
        double worst = 0.0;
        for (int i = 0; i < samples_per_interval; ++i) {
            const double x = seg.x_left + seg.h * i / (samples_per_interval - 1);
            worst = std::max(worst, frobenius_norm(seg.at(x - seg.x_left) - exact(x)));
        }
        report.push_back(IntervalError{seg.x_left, seg.x_left + seg.h, worst});
    }
    return report;
}

ConvergenceStudy convergence_study(const ProblemSpec& p, const std::vector<double>& steps,
                                   const SolverConfig& cfg) {
    if (!p.exact) throw ConfigError("convergence study needs an exact solution");
    if (steps.empty()) throw ConfigError("convergence study needs at least one step size");
    ConvergenceStudy study;
    for (double h : steps) {
        SolverConfig run = cfg;
        run.segments.reset();
        run.step = h;
        const int n = resolve_segment_count(p, run);
        const IntegrationResult res = integrate(p, run);
        double worst = 0.0;
        for (const auto& e : error_report(res.spline, p.exact, cfg.samples_per_interval))
            worst = std::max(worst, e.max_error);
        study.entries.push_back(ConvergenceEntry{(p.b - p.a) / n, n, worst});
    }

    // Errors at rounding level make log-log slopes meaningless.
    for (const auto& e : study.entries)
        if (e.max_error < 1e-14) study.degenerate = true;
    if (study.degenerate || study.entries.size() < 2) {
        study.degenerate = true;
        return study;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double count = static_cast<double>(study.entries.size());
    for (const auto& e : study.entries) {
        const double lx = std::log(e.h);
        const double ly = std::log(e.max_error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) {
        study.degenerate = true;
        return study;
    }
    study.fitted_order = (count * sxy - sx * sy) / denom;
    return study;
}

}  // namespace mxspline

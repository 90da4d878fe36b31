#include "mxspline/problems.hpp"

#include <cmath>
#include <numbers>

namespace mxspline {

namespace {

using std::cos;
using std::exp;
using std::sin;

// ---- nonlinear vector system ----------------------------------------------

Matrix guzman_f(double x, const Matrix& y) {
    const double y1 = y(0, 0);
    const double y2 = y(1, 0);
    Matrix out(2, 1);
    out(0, 0) = -1.0 + exp(x) - sin(x) + sin(y2);
    out(1, 0) = 1.0 / (4.0 + y1 * y1) -
                1.0 / (5.0 + exp(2.0 * x) + 2.0 * exp(x) * cos(x) - sin(x) * sin(x));
    return out;
}

Matrix guzman_df_dx(double x, const Matrix&) {
    const double denom = 5.0 + exp(2.0 * x) + 2.0 * exp(x) * cos(x) - sin(x) * sin(x);
    Matrix out(2, 1);
    out(0, 0) = exp(x) - cos(x);
    out(1, 0) = (2.0 * exp(2.0 * x) + 2.0 * exp(x) * cos(x) - 2.0 * exp(x) * sin(x) -
                 2.0 * cos(x) * sin(x)) /
                (denom * denom);
    return out;
}

Matrix guzman_df_dvec_y(double, const Matrix& y) {
    const double y1 = y(0, 0);
    const double y2 = y(1, 0);
    const double q = 4.0 + y1 * y1;
    // Blocks d f / d y1 and d f / d y2, stacked.
    Matrix out(4, 1);
    out(0, 0) = 0.0;
    out(1, 0) = -2.0 * y1 / (q * q);
    out(2, 0) = cos(y2);
    out(3, 0) = 0.0;
    return out;
}

// ---- Sylvester coefficients ------------------------------------------------

Matrix sylv_a(double x) { return Matrix::from_rows({{0.0, x * exp(-x)}, {x, 0.0}}); }
Matrix sylv_b(double x) { return Matrix::from_rows({{0.0, x}, {0.0, 0.0}}); }
Matrix sylv_c(double x) {
    return Matrix::from_rows({{-exp(-x) * (1.0 + x * x), -2.0 * exp(-x) * x},
                              {1.0 - exp(-x) * x, -x * x}});
}
Matrix sylv_da(double x) { return Matrix::from_rows({{0.0, exp(-x) * (1.0 - x)}, {1.0, 0.0}}); }
Matrix sylv_db(double) { return Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }
Matrix sylv_dc(double x) {
    return Matrix::from_rows({{exp(-x) * (1.0 + x * x - 2.0 * x), 2.0 * exp(-x) * (x - 1.0)},
                              {exp(-x) * (x - 1.0), -2.0 * x}});
}

Matrix sylvester_f(double x, const Matrix& y) { return sylv_a(x) * y + y * sylv_b(x) + sylv_c(x); }

Matrix sylvester_df_dx(double x, const Matrix& y) {
    return sylv_da(x) * y + y * sylv_db(x) + sylv_dc(x);
}

Matrix sylvester_df_dvec_y(double x, const Matrix&) {
    const Matrix a = sylv_a(x);
    const Matrix b = sylv_b(x);
    // d f / d y_ij = A E_ij + E_ij B, stacked in column-major entry order.
    Matrix out(8, 2);
    int blk = 0;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i, ++blk) {
            Matrix e(2, 2);
            e(i, j) = 1.0;
            const Matrix block = a * e + e * b;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) out(blk * 2 + r, c) = block(r, c);
        }
    return out;
}

// ---- Riccati coefficients ----------------------------------------------------

Matrix ricc_a(double x) { return Matrix::from_rows({{-x, 0.0}, {-x, x}}); }
Matrix ricc_b(double x) { return Matrix::from_rows({{-x * x, -2.0}, {0.0, 1.0}}); }
Matrix ricc_d(double x) { return Matrix::from_rows({{-1.0, -x * x}, {x, x}}); }
Matrix ricc_c(double x) {
    return Matrix::from_rows(
        {{x * (-exp(x) + exp(x) * x - x * x * x), x * (2.0 * exp(x) - x * x)},
         {(1.0 - x) * x * (2.0 + x + 2.0 * x * x),
          1.0 + (3.0 - 2.0 * x) * x * x + exp(x) * (x - x * x * x * x)}});
}

}  // namespace

ProblemSpec guzman_problem() {
    ProblemSpec p;
    p.name = "guzman";
    p.rows = 2;
    p.cols = 1;
    p.a = 0.0;
    p.b = 1.0;
    p.initial = Matrix::from_rows({{2.0}, {std::numbers::pi / 2.0}});
    p.lipschitz = 1.0;
    p.f = guzman_f;
    p.df_dx = guzman_df_dx;
    p.df_dvec_y = guzman_df_dvec_y;
    p.exact = [](double x) {
        return Matrix::from_rows({{exp(x) + cos(x)}, {std::numbers::pi / 2.0}});
    };
    return p;
}

ProblemSpec sylvester_problem() {
    ProblemSpec p;
    p.name = "sylvester";
    p.rows = 2;
    p.cols = 2;
    p.a = 0.0;
    p.b = 1.0;
    p.initial = Matrix::identity(2);
    p.lipschitz = 2.0;
    p.f = sylvester_f;
    p.df_dx = sylvester_df_dx;
    p.df_dvec_y = sylvester_df_dvec_y;
    p.exact = [](double x) { return Matrix::from_rows({{exp(-x), 0.0}, {x, 1.0}}); };
    p.affine = AffineStructure{sylv_a, sylv_b, sylv_c};
    return p;
}

Matrix sylvester_second_derivative(double x, const Matrix& y) {
    const Matrix a = sylv_a(x);
    const Matrix b = sylv_b(x);
    const Matrix c = sylv_c(x);
    return (sylv_da(x) + a * a) * y + y * (b * b + sylv_db(x)) + 2.0 * (a * y) * b + a * c +
           c * b + sylv_dc(x);
}

RiccatiProblem riccati_bounds_problem() {
    RiccatiProblem rp;
    rp.a = ricc_a;
    rp.b = ricc_b;
    rp.c = ricc_c;
    rp.d = ricc_d;
    rp.y0 = Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    rp.interval_end = 1.0;
    rp.delta_hint = 0.1;  // the integration horizon; the admissible supremum
                          // sits on the bound's singularity
    return rp;
}

ProblemSpec riccati_problem() {
    const RiccatiProblem rp = riccati_bounds_problem();
    ProblemSpec p;
    p.name = "riccati";
    p.rows = 2;
    p.cols = 2;
    p.a = 0.0;
    p.b = 0.1;
    p.initial = rp.y0;
    p.lipschitz = compute_bounds(rp, std::nullopt, 1001).lipschitz;
    p.f = riccati_field(rp);
    // Partial derivatives intentionally left to the finite-difference
    // fallback; only Y''(0) consumes them.
    p.exact = [](double x) { return Matrix::from_rows({{0.0, exp(x)}, {x * x, x}}); };
    return p;
}

ProblemSpec zero_problem() {
    ProblemSpec p;
    p.name = "zero";
    p.rows = 2;
    p.cols = 2;
    p.a = 0.0;
    p.b = 1.0;
    p.initial = Matrix::from_rows({{1.0, -2.0}, {0.5, 3.0}});
    p.lipschitz = 1.0;  // any positive constant bounds the zero field
    p.f = [](double, const Matrix& y) { return Matrix(y.rows(), y.cols()); };
    p.df_dx = [](double, const Matrix& y) { return Matrix(y.rows(), y.cols()); };
    p.df_dvec_y = [](double, const Matrix& y) {
        return Matrix(y.rows() * y.rows() * y.cols(), y.cols());
    };
    const Matrix initial = p.initial;
    p.exact = [initial](double) { return initial; };
    return p;
}

ProblemSpec scalar_exp_problem() {
    ProblemSpec p;
    p.name = "scalar-exp";
    p.rows = 1;
    p.cols = 1;
    p.a = 0.0;
    p.b = 1.0;
    p.initial = Matrix::from_rows({{1.0}});
    p.lipschitz = 1.0;
    p.f = [](double, const Matrix& y) { return y; };
    p.df_dx = [](double, const Matrix&) { return Matrix(1, 1); };
    p.df_dvec_y = [](double, const Matrix&) { return Matrix::from_rows({{1.0}}); };
    p.exact = [](double x) { return Matrix::from_rows({{exp(x)}}); };
    return p;
}

std::vector<std::string> builtin_problem_names() {
    return {"guzman", "sylvester", "riccati", "zero", "scalar-exp"};
}

bool is_builtin_problem(const std::string& name) {
    for (const auto& n : builtin_problem_names())
        if (n == name) return true;
    return false;
}

ProblemSpec builtin_problem(const std::string& name) {
    if (name == "guzman") return guzman_problem();
    if (name == "sylvester") return sylvester_problem();
    if (name == "riccati") return riccati_problem();
    if (name == "zero") return zero_problem();
    if (name == "scalar-exp") return scalar_exp_problem();
    throw ConfigError("unknown problem '" + name + "'; built-ins: guzman, sylvester, riccati, "
                      "zero, scalar-exp");
}

}  // namespace mxspline

#pragma once

#include <string>
#include <vector>

#include "mxspline/integrate.hpp"
#include "mxspline/riccati_bounds.hpp"

namespace mxspline {

// Built-in problems with exact solutions. Names double as the CLI
// --problem vocabulary.
std::vector<std::string> builtin_problem_names();
bool is_builtin_problem(const std::string& name);
ProblemSpec builtin_problem(const std::string& name);  // throws ConfigError for unknown names

// Nonlinear 2-component vector system on [0,1] with solution
// (e^x + cos x, pi/2); analytic partial derivatives supplied.
ProblemSpec guzman_problem();

// Sylvester equation Y' = A(x)Y + Y B(x) + C(x) on [0,1] with solution
// [[e^-x, 0], [x, 1]]; carries the affine structure for direct solves.
ProblemSpec sylvester_problem();

// Closed-form Y'' for the Sylvester problem from differentiating the
// equation itself; cross-checks the generic chain-rule path.
Matrix sylvester_second_derivative(double x, const Matrix& y);

// Riccati equation Y' = C(x) - D(x)Y - YA(x) - YB(x)Y on [0, 0.1] with
// solution [[0, e^x], [x^2, x]]; partial derivatives left to the
// finite-difference fallback, Lipschitz constant from the bounds pipeline.
ProblemSpec riccati_problem();

// Coefficients of the same Riccati problem for the bounds machinery
// (defined on [0,1]; bound chain evaluated at delta = 0.1 by default).
RiccatiProblem riccati_bounds_problem();

// Y' = 0: the spline must be exactly constant.
ProblemSpec zero_problem();

// Scalar y' = y, y(0) = 1 on [0,1].
ProblemSpec scalar_exp_problem();

}  // namespace mxspline

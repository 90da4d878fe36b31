#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mxspline/expr.hpp"
#include "mxspline/integrate.hpp"
#include "mxspline/riccati_bounds.hpp"

#include <json.hpp>

namespace mxspline {

// Matrix-valued function of x whose entries are parsed expressions; the form
// coefficient matrices take in config documents.
struct ExprMatrix {
    int rows = 0, cols = 0;
    std::vector<expr::Expr> entries;  // row-major

    bool defined() const { return rows > 0; }
    Matrix eval(double x) const;
};

// User-supplied problem from a config document. Sylvester problems are
//   Y' = A(x) Y + Y B(x) + C(x)
// and Riccati problems
//   Y' = C(x) - D(x) Y - Y A(x) - Y B(x) Y.
struct InlineProblem {
    std::string kind;  // "sylvester" | "riccati"
    ExprMatrix a, b, c, d;
    Matrix y0;
    double interval_a = 0.0, interval_b = 1.0;
    std::optional<double> lipschitz;  // required to integrate, not to run bounds
};

struct OutputSpec {
    std::string path;
    std::string format = "csv";  // table | csv | json
};

// One run/convergence invocation as described by a JSON config document.
// Command-line flags override individual fields.
struct RunConfig {
    std::optional<std::string> builtin;
    std::optional<InlineProblem> inline_problem;
    std::optional<int> segments;
    std::optional<double> step;
    std::optional<double> fp_tol;
    std::optional<int> fp_max_iter;
    std::optional<std::string> mode;
    std::optional<int> samples_per_interval;
    std::optional<OutputSpec> output;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);  // ConfigError on I/O or schema problems

// Builds an integrator problem from an inline definition. Throws ConfigError
// when the definition carries no Lipschitz constant: the artifact does not
// estimate one for arbitrary user fields.
ProblemSpec make_problem(const InlineProblem& def);

// Coefficients of an inline Riccati problem for the bounds pipeline.
RiccatiProblem make_riccati_bounds_problem(const InlineProblem& def);

SolveMode parse_mode(const std::string& name);

}  // namespace mxspline

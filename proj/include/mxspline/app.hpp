#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mxspline {

// Options shared by run and convergence; every field mirrors a CLI flag and
// overrides the corresponding config-document value when set.
struct CommonOptions {
    std::optional<std::string> problem;      // built-in name
    std::optional<std::string> config_path;  // JSON document
    std::optional<int> segments;
    std::optional<double> step;
    std::optional<double> fp_tol;
    std::optional<int> fp_max_iter;
    std::optional<std::string> mode;  // auto | fixed-point | direct-affine
    std::optional<int> samples;
    bool override_step = false;
    std::optional<std::string> output_path;
    std::optional<std::string> format;  // table | csv | json
    std::optional<std::string> save_spline;
};

struct ConvergenceOptions {
    CommonOptions common;
    std::vector<double> steps;  // empty: default sweep 0.1 0.05 0.025 0.0125
};

struct BoundsOptions {
    std::optional<std::string> problem;
    std::optional<std::string> config_path;
    std::optional<double> delta;
    int grid_points = 1001;
    std::vector<std::string> norm_overrides;  // e.g. "w0=fro", "k0=two"
};

struct EvalOptions {
    std::string spline_path;
    std::vector<double> points;
};

// Exit codes: 0 success, 2 configuration/parse/domain errors, 3 solver
// failures (non-convergence, singular segment equation, inadmissible delta).
int cmd_run(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_convergence(const ConvergenceOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bounds(const BoundsOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace mxspline

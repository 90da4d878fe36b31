#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mxspline/app.hpp"

namespace {

// CLI11 stores into plain values; these wrappers keep "was it given?".
template <typename T>
void add_opt(CLI::App* cmd, const std::string& flag, std::optional<T>& slot,
             const std::string& help) {
    auto* opt = cmd->add_option_function<T>(
        flag, [&slot](const T& v) { slot = v; }, help);
    opt->expected(1);
}

void add_common(CLI::App* cmd, mxspline::CommonOptions& opts, bool with_partition = true) {
    cmd->set_help_flag("--help", "print this help message and exit");
    add_opt<std::string>(cmd, "--problem", opts.problem,
                         "built-in problem (guzman, sylvester, riccati, zero, scalar-exp)");
    add_opt<std::string>(cmd, "--config", opts.config_path, "JSON config document");
    if (with_partition) {
        add_opt<int>(cmd, "--n", opts.segments, "number of segments");
        add_opt<double>(cmd, "--h", opts.step, "step size (segment count derived)");
    }
    add_opt<double>(cmd, "--tol", opts.fp_tol, "fixed-point residual tolerance (default 1e-13)");
    add_opt<int>(cmd, "--max-iter", opts.fp_max_iter,
                 "fixed-point iteration limit (default 200)");
    add_opt<std::string>(cmd, "--mode", opts.mode, "auto | fixed-point | direct-affine");
    add_opt<int>(cmd, "--samples", opts.samples,
                 "error samples per interval, endpoints included (default 101)");
    cmd->add_flag("--override", opts.override_step, "skip the h*L/3 < 1 step check");
    add_opt<std::string>(cmd, "--output", opts.output_path, "write the report to this file");
    add_opt<std::string>(cmd, "--format", opts.format, "table | csv | json (default table)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-cubic-spline integrator for first-order matrix ODEs Y' = f(x, Y)"};
    app.require_subcommand(1);
    // --h is a step size here, so the help flag keeps only its long form.
    app.set_help_flag("--help", "print this help message and exit");
    app.option_defaults()->ignore_case(false);

    mxspline::CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "integrate a problem and report per-interval errors");
    add_common(run, run_opts);
    add_opt<std::string>(run, "--save-spline", run_opts.save_spline,
                         "write the spline as JSON to this file");

    mxspline::ConvergenceOptions conv_opts;
    auto* conv = app.add_subcommand("convergence", "error-vs-step study with a log-log order fit");
    add_common(conv, conv_opts.common, /*with_partition=*/false);
    conv->add_option("--h", conv_opts.steps,
                     "step sizes to sweep (default 0.1 0.05 0.025 0.0125)")
        ->delimiter(',')
        ->allow_extra_args();

    mxspline::BoundsOptions bounds_opts;
    auto* bounds = app.add_subcommand("bounds", "Riccati existence bounds and Lipschitz constant");
    bounds->set_help_flag("--help", "print this help message and exit");
    add_opt<std::string>(bounds, "--problem", bounds_opts.problem, "built-in problem (riccati)");
    add_opt<std::string>(bounds, "--config", bounds_opts.config_path,
                         "JSON config with an inline riccati problem");
    add_opt<double>(bounds, "--delta", bounds_opts.delta,
                    "evaluate the bound chain at this delta instead of the default");
    bounds->add_option("--grid", bounds_opts.grid_points, "sup-sampling grid points")
        ->default_val(1001);
    bounds->add_option("--norm", bounds_opts.norm_overrides,
                       "norm override key=fro|two (keys: k0, q0, w0, coeff); repeatable");

    mxspline::EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "evaluate a saved spline (value and derivatives)");
    eval->add_option("spline", eval_opts.spline_path, "spline JSON written by run --save-spline")
        ->required();
    eval->add_option("x", eval_opts.points, "evaluation points")->required();

    // A note on --h in convergence: it takes several values; a bare "--h 0.1
    // 0.05" works, as does "--h 0.1,0.05".
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*run) return mxspline::cmd_run(run_opts, std::cout, std::cerr);
    if (*conv) return mxspline::cmd_convergence(conv_opts, std::cout, std::cerr);
    if (*bounds) return mxspline::cmd_bounds(bounds_opts, std::cout, std::cerr);
    if (*eval) return mxspline::cmd_eval(eval_opts, std::cout, std::cerr);
    return 2;
}

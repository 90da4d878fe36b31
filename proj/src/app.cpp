#include "mxspline/app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "mxspline/config.hpp"
#include "mxspline/problems.hpp"

namespace mxspline {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_full(double v) { return fmt(v, "%.17g"); }

std::string matrix_str(const Matrix& m) {
    std::string out = "[";
    for (int i = 0; i < m.rows(); ++i) {
        out += i == 0 ? "[" : ", [";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += fmt(m(i, j));
        }
        out += "]";
    }
    return out + "]";
}

int classify(const Error& e) {
    if (dynamic_cast<const ConvergenceError*>(&e) ||
        dynamic_cast<const SingularMatrixError*>(&e) ||
        dynamic_cast<const InadmissibleDeltaError*>(&e) ||
        dynamic_cast<const IterationLimitError*>(&e))
        return 3;
    return 2;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

struct ResolvedRun {
    ProblemSpec problem;
    SolverConfig solver;
    std::string format = "table";
    std::optional<std::string> output_path;
};

ResolvedRun resolve(const CommonOptions& opts) {
    RunConfig cfg;
    if (opts.config_path) cfg = load_run_config(*opts.config_path);

    ResolvedRun r;
    if (opts.problem) {
        r.problem = builtin_problem(*opts.problem);
    } else if (cfg.builtin) {
        r.problem = builtin_problem(*cfg.builtin);
    } else if (cfg.inline_problem) {
        r.problem = make_problem(*cfg.inline_problem);
    } else {
        throw ConfigError("no problem given: use --problem or a config document");
    }

    if (opts.segments) r.solver.segments = *opts.segments;
    else if (opts.step) r.solver.step = *opts.step;
    else if (cfg.segments) r.solver.segments = *cfg.segments;
    else if (cfg.step) r.solver.step = *cfg.step;
    if (opts.segments && opts.step) throw ConfigError("give --n or --h, not both");

    if (opts.fp_tol) r.solver.fp_tol = *opts.fp_tol;
    else if (cfg.fp_tol) r.solver.fp_tol = *cfg.fp_tol;
    if (opts.fp_max_iter) r.solver.fp_max_iter = *opts.fp_max_iter;
    else if (cfg.fp_max_iter) r.solver.fp_max_iter = *cfg.fp_max_iter;
    if (opts.samples) r.solver.samples_per_interval = *opts.samples;
    else if (cfg.samples_per_interval) r.solver.samples_per_interval = *cfg.samples_per_interval;
    r.solver.mode = parse_mode(opts.mode ? *opts.mode : cfg.mode.value_or("auto"));
    r.solver.override_step_condition = opts.override_step;

    if (opts.format) r.format = *opts.format;
    else if (cfg.output) r.format = cfg.output->format;
    if (r.format != "table" && r.format != "csv" && r.format != "json")
        throw ConfigError("format: expected table, csv or json, got \"" + r.format + '"');
    if (opts.output_path) r.output_path = *opts.output_path;
    else if (cfg.output) r.output_path = cfg.output->path;
    return r;
}

struct RunReport {
    std::vector<IntervalError> intervals;  // max_error = NaN without an exact solution
    std::vector<int> iterations;
    bool have_errors = false;
};

void render_run(const RunReport& rep, const std::string& format, std::ostream& out) {
    if (format == "csv") {
        out << "interval_left,interval_right,max_frobenius_error,fp_iterations\n";
        for (std::size_t i = 0; i < rep.intervals.size(); ++i)
            out << fmt_full(rep.intervals[i].x_left) << ',' << fmt_full(rep.intervals[i].x_right)
                << ',' << fmt_full(rep.intervals[i].max_error) << ',' << rep.iterations[i]
                << '\n';
        return;
    }
    if (format == "json") {
        nlohmann::json doc;
        doc["intervals"] = nlohmann::json::array();
        for (std::size_t i = 0; i < rep.intervals.size(); ++i) {
            nlohmann::json row = {{"left", rep.intervals[i].x_left},
                                  {"right", rep.intervals[i].x_right},
                                  {"fp_iterations", rep.iterations[i]}};
            if (rep.have_errors) row["max_frobenius_error"] = rep.intervals[i].max_error;
            else row["max_frobenius_error"] = nullptr;
            doc["intervals"].push_back(row);
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << "interval                 max_error      iterations\n";
    for (std::size_t i = 0; i < rep.intervals.size(); ++i) {
        const std::string iv =
            "[" + fmt(rep.intervals[i].x_left) + ", " + fmt(rep.intervals[i].x_right) + "]";
        const std::string errs = rep.have_errors ? fmt(rep.intervals[i].max_error) : "n/a";
        char line[96];
        std::snprintf(line, sizeof line, "%-24s %-14s %d\n", iv.c_str(), errs.c_str(),
                      rep.iterations[i]);
        out << line;
    }
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write to '" + path + "'");
    body(f);
}

}  // namespace

int cmd_run(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const ResolvedRun r = resolve(opts);
        const IntegrationResult result = integrate(r.problem, r.solver);
        if (result.fd_fallback_used)
            err << "note: Y''(a) computed by finite differences (no analytic partials)\n";

        RunReport rep;
        rep.iterations = result.fp_iterations;
        rep.have_errors = static_cast<bool>(r.problem.exact);
        if (rep.have_errors) {
            rep.intervals =
                error_report(result.spline, r.problem.exact, r.solver.samples_per_interval);
        } else {
            for (int k = 0; k < result.spline.segment_count(); ++k) {
                const auto& seg = result.spline.segment(k);
                rep.intervals.push_back(
                    IntervalError{seg.x_left, seg.x_left + seg.h, std::nan("")});
            }
        }

        if (opts.save_spline)
            write_file(*opts.save_spline,
                       [&](std::ostream& f) { f << to_json(result.spline).dump(2) << '\n'; });

        if (r.output_path) {
            write_file(*r.output_path, [&](std::ostream& f) { render_run(rep, r.format, f); });
            render_run(rep, "table", out);
        } else {
            render_run(rep, r.format, out);
        }
        return 0;
    });
}

int cmd_convergence(const ConvergenceOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const ResolvedRun r = resolve(opts.common);
        if (!r.problem.exact)
            throw ConfigError("convergence studies need a problem with an exact solution");
        const std::vector<double> steps =
            opts.steps.empty() ? std::vector<double>{0.1, 0.05, 0.025, 0.0125} : opts.steps;
        const ConvergenceStudy study = convergence_study(r.problem, steps, r.solver);

        const auto render = [&](std::ostream& os, const std::string& format) {
            if (format == "csv") {
                os << "h,n,max_error\n";
                for (const auto& e : study.entries)
                    os << fmt_full(e.h) << ',' << e.n << ',' << fmt_full(e.max_error) << '\n';
                return;
            }
            if (format == "json") {
                nlohmann::json doc;
                doc["entries"] = nlohmann::json::array();
                for (const auto& e : study.entries)
                    doc["entries"].push_back(
                        {{"h", e.h}, {"n", e.n}, {"max_error", e.max_error}});
                doc["degenerate"] = study.degenerate;
                if (study.fitted_order) doc["fitted_order"] = *study.fitted_order;
                else doc["fitted_order"] = nullptr;
                os << doc.dump(2) << '\n';
                return;
            }
            os << "h              n        max_error\n";
            for (const auto& e : study.entries) {
                char line[80];
                std::snprintf(line, sizeof line, "%-14s %-8d %s\n", fmt(e.h).c_str(), e.n,
                              fmt(e.max_error).c_str());
                os << line;
            }
            if (study.fitted_order) os << "fitted order: " << fmt(*study.fitted_order) << '\n';
            else os << "fitted order: n/a (degenerate)\n";
        };

        if (study.degenerate)
            err << "warning: errors at rounding level; order fit is degenerate\n";
        if (r.output_path) {
            write_file(*r.output_path, [&](std::ostream& f) { render(f, r.format); });
            render(out, "table");
        } else {
            render(out, r.format);
        }
        return 0;
    });
}

namespace {

NormKind parse_norm_kind(const std::string& v, const std::string& where) {
    if (v == "fro" || v == "frobenius") return NormKind::Frobenius;
    if (v == "two" || v == "2") return NormKind::Two;
    throw ConfigError(where + ": expected fro or two, got \"" + v + '"');
}

BoundsNormChoices parse_norm_overrides(const std::vector<std::string>& overrides) {
    BoundsNormChoices norms;
    for (const auto& s : overrides) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--norm: expected key=value (keys: k0, q0, w0, coeff)");
        const std::string key = s.substr(0, eq);
        const NormKind kind = parse_norm_kind(s.substr(eq + 1), "--norm " + key);
        if (key == "k0") norms.k0 = kind;
        else if (key == "q0") norms.q0 = kind;
        else if (key == "w0") norms.w0 = kind;
        else if (key == "coeff") norms.coeff = kind;
        else throw ConfigError("--norm: unknown key \"" + key + "\" (keys: k0, q0, w0, coeff)");
    }
    return norms;
}

}  // namespace

int cmd_bounds(const BoundsOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        RiccatiProblem problem;
        if (opts.problem) {
            if (*opts.problem != "riccati")
                throw ConfigError("bounds are defined for the riccati problem; got \"" +
                                  *opts.problem + '"');
            problem = riccati_bounds_problem();
        } else if (opts.config_path) {
            const RunConfig cfg = load_run_config(*opts.config_path);
            if (!cfg.inline_problem)
                throw ConfigError("bounds config must define an inline riccati problem");
            problem = make_riccati_bounds_problem(*cfg.inline_problem);
        } else {
            throw ConfigError("no problem given: use --problem riccati or a config document");
        }

        const BoundsNormChoices norms = parse_norm_overrides(opts.norm_overrides);
        const RiccatiBounds bounds = compute_bounds(problem, opts.delta, opts.grid_points, norms);

        const std::string domain = "[0, " + fmt(problem.interval_end) + "]";
        const std::string ball = "[0, " + fmt(bounds.delta_used) + "]";
        out << "k0         = " << fmt(bounds.k0) << "    (" << norm_name(norms.k0)
            << " norm of [[A,B],[C,-D]], sup over " << domain << ")\n";
        out << "q0         = " << fmt(bounds.q0) << "    (" << norm_name(norms.q0)
            << " norm of [A B], sup over " << domain << ")\n";
        out << "w0         = " << fmt(bounds.w0) << "    (" << norm_name(norms.w0)
            << " of [I; Y0])\n";
        if (bounds.delta_unconstrained)
            out << "delta      = " << fmt(bounds.delta)
                << "    (every positive delta admissible; reporting the interval end)\n";
        else
            out << "delta      = " << fmt(bounds.delta) << "    (admissible supremum)\n";
        out << "delta_used = " << fmt(bounds.delta_used) << "\n";
        out << "M          = " << fmt(bounds.m) << "    (solution bound on " << ball << ")\n";
        out << "a          = " << fmt(bounds.sups.a) << "    (" << norm_name(norms.coeff)
            << " norm of A, sup over " << ball << ")\n";
        out << "b          = " << fmt(bounds.sups.b) << "    (likewise for B)\n";
        out << "c          = " << fmt(bounds.sups.c) << "    (likewise for C)\n";
        out << "d          = " << fmt(bounds.sups.d) << "    (likewise for D)\n";
        out << "L          = " << fmt(bounds.lipschitz) << "    (a + d + 2*b*M)\n";
        if (bounds.lipschitz > 0.0)
            out << "step condition: h < 3/L = " << fmt(3.0 / bounds.lipschitz) << "\n";
        else
            out << "step condition: L = 0, any positive step is admissible\n";
        return 0;
    });
}

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        std::ifstream in(opts.spline_path);
        if (!in) throw ConfigError("cannot open spline file '" + opts.spline_path + "'");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("spline '" + opts.spline_path + "': " + e.what());
        }
        MatrixSpline spline = [&] {
            try {
                return spline_from_json(doc);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("spline '" + opts.spline_path + "': " + e.what());
            }
        }();
        if (opts.points.empty()) throw ConfigError("eval needs at least one point");
        for (double x : opts.points) {
            out << "x = " << fmt(x) << "\n";
            out << "  S   = " << matrix_str(spline.eval(x, 0)) << "\n";
            out << "  S'  = " << matrix_str(spline.eval(x, 1)) << "\n";
            out << "  S'' = " << matrix_str(spline.eval(x, 2)) << "\n";
        }
        return 0;
    });
}

}  // namespace mxspline

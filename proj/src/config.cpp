#include "mxspline/config.hpp"

#include <fstream>
#include <utility>

namespace mxspline {

Matrix ExprMatrix::eval(double x) const {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = entries[static_cast<std::size_t>(i) * cols + j].eval(x);
    return m;
}

namespace {

ExprMatrix parse_expr_matrix(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ConfigError(where + ": expected a 2-D array of expression strings");
    ExprMatrix m;
    m.rows = static_cast<int>(j.size());
    m.cols = static_cast<int>(j[0].size());
    for (int i = 0; i < m.rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != m.cols)
            throw ConfigError(where + ": ragged rows");
        for (int c = 0; c < m.cols; ++c) {
            const auto& cell = row[c];
            const std::string source =
                cell.is_string() ? cell.get<std::string>() : cell.dump();
            try {
                m.entries.push_back(expr::parse(source));
            } catch (const ParseError& e) {
                throw ConfigError(where + "[" + std::to_string(i) + "][" + std::to_string(c) +
                                  "]: " + e.what());
            }
        }
    }
    return m;
}

Matrix parse_numeric_matrix(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ConfigError(where + ": expected a 2-D numeric array");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ConfigError(where + ": ragged rows");
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number()) throw ConfigError(where + ": entries must be numbers");
            m(i, c) = row[c].get<double>();
        }
    }
    return m;
}

void check_dims(const std::string& kind, const InlineProblem& p) {
    const int r = p.y0.rows();
    const int q = p.y0.cols();
    auto expect = [&](const ExprMatrix& m, const char* name, int er, int ec) {
        if (m.rows != er || m.cols != ec)
            throw ConfigError("problem." + std::string(name) + ": expected " +
                              std::to_string(er) + "x" + std::to_string(ec) + " for a " + kind +
                              " problem with a " + std::to_string(r) + "x" + std::to_string(q) +
                              " initial value");
    };
    if (kind == "sylvester") {
        expect(p.a, "A", r, r);
        expect(p.b, "B", q, q);
        expect(p.c, "C", r, q);
    } else {  // riccati: Y p x q
        expect(p.a, "A", q, q);
        expect(p.b, "B", q, r);
        expect(p.c, "C", r, q);
        expect(p.d, "D", r, r);
    }
}

InlineProblem parse_inline_problem(const nlohmann::json& j) {
    InlineProblem p;
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("problem.kind: expected \"sylvester\" or \"riccati\"");
    p.kind = j["kind"].get<std::string>();
    if (p.kind != "sylvester" && p.kind != "riccati")
        throw ConfigError("problem.kind: expected \"sylvester\" or \"riccati\", got \"" + p.kind +
                          '"');
    for (const char* key : {"A", "B", "C", "Y0", "interval"})
        if (!j.contains(key)) throw ConfigError(std::string("problem.") + key + ": missing");
    p.a = parse_expr_matrix(j["A"], "problem.A");
    p.b = parse_expr_matrix(j["B"], "problem.B");
    p.c = parse_expr_matrix(j["C"], "problem.C");
    if (p.kind == "riccati") {
        if (!j.contains("D")) throw ConfigError("problem.D: missing (required for riccati)");
        p.d = parse_expr_matrix(j["D"], "problem.D");
    } else if (j.contains("D")) {
        throw ConfigError("problem.D: only riccati problems take a D coefficient");
    }
    p.y0 = parse_numeric_matrix(j["Y0"], "problem.Y0");
    const auto& iv = j["interval"];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
        throw ConfigError("problem.interval: expected [a, b]");
    p.interval_a = iv[0].get<double>();
    p.interval_b = iv[1].get<double>();
    if (!(p.interval_a < p.interval_b)) throw ConfigError("problem.interval: a must be below b");
    if (j.contains("L")) {
        if (!j["L"].is_number() || !(j["L"].get<double>() > 0.0))
            throw ConfigError("problem.L: expected a positive number");
        p.lipschitz = j["L"].get<double>();
    }
    check_dims(p.kind, p);
    return p;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
    RunConfig cfg;
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "problem") {
            if (value.is_string()) cfg.builtin = value.get<std::string>();
            else if (value.is_object()) cfg.inline_problem = parse_inline_problem(value);
            else throw ConfigError("problem: expected a name or an inline definition");
        } else if (key == "n") {
            cfg.segments = value.get<int>();
        } else if (key == "h") {
            cfg.step = value.get<double>();
        } else if (key == "fp_tol") {
            cfg.fp_tol = value.get<double>();
        } else if (key == "fp_max_iter") {
            cfg.fp_max_iter = value.get<int>();
        } else if (key == "mode") {
            cfg.mode = value.get<std::string>();
        } else if (key == "samples_per_interval") {
            cfg.samples_per_interval = value.get<int>();
        } else if (key == "output") {
            OutputSpec spec;
            spec.path = value.at("path").get<std::string>();
            if (value.contains("format")) spec.format = value["format"].get<std::string>();
            cfg.output = std::move(spec);
        } else {
            throw ConfigError("config: unknown key \"" + key + '"');
        }
    }
    if (cfg.segments && cfg.step) throw ConfigError("config: give n or h, not both");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    try {
        return parse_run_config(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

ProblemSpec make_problem(const InlineProblem& def) {
    if (!def.lipschitz)
        throw ConfigError("inline problems need an explicit L (Lipschitz constant) to integrate");
    ProblemSpec p;
    p.rows = def.y0.rows();
    p.cols = def.y0.cols();
    p.a = def.interval_a;
    p.b = def.interval_b;
    p.initial = def.y0;
    p.lipschitz = *def.lipschitz;
    if (def.kind == "sylvester") {
        p.name = "inline-sylvester";
        auto a = [m = def.a](double x) { return m.eval(x); };
        auto b = [m = def.b](double x) { return m.eval(x); };
        auto c = [m = def.c](double x) { return m.eval(x); };
        p.f = [a, b, c](double x, const Matrix& y) { return a(x) * y + y * b(x) + c(x); };
        p.affine = AffineStructure{a, b, c};
    } else {
        p.name = "inline-riccati";
        p.f = riccati_field(make_riccati_bounds_problem(def));
    }
    return p;
}

RiccatiProblem make_riccati_bounds_problem(const InlineProblem& def) {
    if (def.kind != "riccati")
        throw ConfigError("bounds need a riccati problem; got kind \"" + def.kind + '"');
    RiccatiProblem rp;
    rp.a = [m = def.a](double x) { return m.eval(x); };
    rp.b = [m = def.b](double x) { return m.eval(x); };
    rp.c = [m = def.c](double x) { return m.eval(x); };
    rp.d = [m = def.d](double x) { return m.eval(x); };
    rp.y0 = def.y0;
    rp.interval_end = def.interval_b;
    return rp;
}

SolveMode parse_mode(const std::string& name) {
    if (name == "auto") return SolveMode::Auto;
    if (name == "fixed-point") return SolveMode::FixedPoint;
    if (name == "direct-affine") return SolveMode::DirectAffine;
    throw ConfigError("mode: expected auto, fixed-point or direct-affine, got \"" + name + '"');
}

}  // namespace mxspline

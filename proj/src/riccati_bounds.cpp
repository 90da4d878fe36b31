#include "mxspline/riccati_bounds.hpp"

#include <cmath>

namespace mxspline {

double matrix_norm(const Matrix& m, NormKind kind) {
    return kind == NormKind::Frobenius ? frobenius_norm(m) : two_norm(m);
}

std::string norm_name(NormKind kind) {
    return kind == NormKind::Frobenius ? "frobenius" : "2-norm";
}

namespace {

double grid_sup(int grid_points, double lo, double hi,
                const std::function<double(double)>& value) {
    double worst = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double x = lo + (hi - lo) * i / (grid_points - 1);
        worst = std::max(worst, value(x));
    }
    return worst;
}

}  // namespace

BlockConstants block_constants(const RiccatiProblem& p, int grid_points,
                               const BoundsNormChoices& norms) {
    if (grid_points < 2) throw ConfigError("grid_points must be at least 2");
    BlockConstants out;
    out.k0 = grid_sup(grid_points, 0.0, p.interval_end, [&](double x) {
        const Matrix top = hcat(p.a(x), p.b(x));
        const Matrix bottom = hcat(p.c(x), -p.d(x));
        return matrix_norm(vcat(top, bottom), norms.k0);
    });
    out.q0 = grid_sup(grid_points, 0.0, p.interval_end,
                      [&](double x) { return matrix_norm(hcat(p.a(x), p.b(x)), norms.q0); });
    out.w0 = matrix_norm(vcat(Matrix::identity(p.y0.cols()), p.y0), norms.w0);
    return out;
}

DeltaResult find_delta(double k0, double q0, double w0, double interval_end) {
    const double product = q0 * w0;
    if (product == 0.0) return DeltaResult{interval_end, true};
    if (product < 0.0) throw DomainError("find_delta: q0*w0 must be non-negative");
    const double target = -std::log(product);
    const auto constraint = [&](double d) { return d * k0 + std::log(d) - target; };
    // The constraint is strictly increasing with limits -inf and +inf, so a
    // bracket always exists.
    double lo = 1e-300;
    double hi = 1.0;
    while (constraint(hi) < 0.0) hi *= 2.0;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (constraint(mid) <= 0.0) lo = mid;
        else hi = mid;
    }
    return DeltaResult{lo, false};  // lower end: strictly admissible
}

double bound_M(double delta, double k0, double q0, double w0) {
    const double growth = std::exp(delta * k0);
    const double denominator = 1.0 - delta * q0 * growth * w0;
    if (!(denominator > 0.0))
        throw InadmissibleDeltaError("bound_M: 1 - delta*q0*exp(delta*k0)*w0 = " +
                                     std::to_string(denominator) + " is not positive");
    return w0 * growth / denominator;
}

CoefficientSups coefficient_sups(const RiccatiProblem& p, double delta, int grid_points,
                                 NormKind norm) {
    if (grid_points < 2) throw ConfigError("grid_points must be at least 2");
    CoefficientSups out;
    out.a = grid_sup(grid_points, 0.0, delta, [&](double x) { return matrix_norm(p.a(x), norm); });
    out.b = grid_sup(grid_points, 0.0, delta, [&](double x) { return matrix_norm(p.b(x), norm); });
    out.c = grid_sup(grid_points, 0.0, delta, [&](double x) { return matrix_norm(p.c(x), norm); });
    out.d = grid_sup(grid_points, 0.0, delta, [&](double x) { return matrix_norm(p.d(x), norm); });
    return out;
}

double lipschitz_constant(double sup_a, double sup_d, double sup_b, double m) {
    return sup_a + sup_d + 2.0 * sup_b * m;
}

double field_sup_bound(const CoefficientSups& sups, double n) {
    if (n < 0.0) throw DomainError("field_sup_bound: N must be non-negative");
    return sups.c + n * (sups.a + sups.d + sups.b * n);
}

SegmentBoundChain segment_bound_chain(double value_norm, double d1_norm, double d2_norm, double h,
                                      double n1, const CoefficientSups& sups, double m) {
    if (!(h > 0.0)) throw DomainError("segment_bound_chain: h must be positive");
    if (n1 < 0.0) throw DomainError("segment_bound_chain: N1 must be non-negative");
    SegmentBoundChain out;
    out.n2 = value_norm + h * d1_norm + 0.5 * h * h * d2_norm + h * h * h / 6.0 * n1;
    out.n3 = field_sup_bound(sups, out.n2);
    out.n4 = 2.0 / (h * h) * (out.n3 + d1_norm + h * d2_norm);
    out.n = std::max({n1, out.n2, out.n3, out.n4, m});
    return out;
}

RiccatiBounds compute_bounds(const RiccatiProblem& p, std::optional<double> delta_override,
                             int grid_points, const BoundsNormChoices& norms) {
    RiccatiBounds out;
    out.norms = norms;
    const BlockConstants blocks = block_constants(p, grid_points, norms);
    out.k0 = blocks.k0;
    out.q0 = blocks.q0;
    out.w0 = blocks.w0;

    const DeltaResult dr = find_delta(out.k0, out.q0, out.w0, p.interval_end);
    out.delta = dr.delta;
    out.delta_unconstrained = dr.unconstrained;

    out.delta_used = delta_override ? *delta_override
                                    : p.delta_hint ? std::min(*p.delta_hint, out.delta)
                                                   : out.delta;
    out.m = bound_M(out.delta_used, out.k0, out.q0, out.w0);
    // Re-check admissibility of the delta M was evaluated at.
    if (!dr.unconstrained &&
        out.delta_used * out.k0 + std::log(out.delta_used) > -std::log(out.q0 * out.w0) + 1e-9)
        throw InadmissibleDeltaError("compute_bounds: delta " + std::to_string(out.delta_used) +
                                     " violates the admissibility inequality");
    out.sups = coefficient_sups(p, out.delta_used, grid_points, norms.coeff);
    out.lipschitz = lipschitz_constant(out.sups.a, out.sups.d, out.sups.b, out.m);
    return out;
}

std::function<Matrix(double, const Matrix&)> riccati_field(const RiccatiProblem& p) {
    return [a = p.a, b = p.b, c = p.c, d = p.d](double x, const Matrix& y) {
        return c(x) - d(x) * y - y * a(x) - y * (b(x) * y);
    };
}

}  // namespace mxspline

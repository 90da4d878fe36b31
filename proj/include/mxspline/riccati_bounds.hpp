#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mxspline/matrix.hpp"

namespace mxspline {

// Riccati matrix differential equation
//   Y'(x) = C(x) - D(x) Y - Y A(x) - Y B(x) Y,  Y(0) = Y0,
// with Y p x q, A q x q, B q x p, C p x q, D p x p, coefficients defined on
// [0, interval_end]. The existence machinery below certifies a solution
// bound M on [0, delta] and from it a local Lipschitz constant L that makes
// the spline step condition h < 3/L checkable.
struct RiccatiProblem {
    std::function<Matrix(double)> a;  // A(x): q x q
    std::function<Matrix(double)> b;  // B(x): q x p
    std::function<Matrix(double)> c;  // C(x): p x q
    std::function<Matrix(double)> d;  // D(x): p x p
    Matrix y0;                        // p x q
    double interval_end = 1.0;        // coefficient domain, used for k0/q0
    // Preferred delta for the bound chain when the caller gives none
    // (typically the integration horizon). The admissible supremum makes the
    // bound denominator vanish, so some strictly smaller value is needed.
    std::optional<double> delta_hint;
};

enum class NormKind { Frobenius, Two };
double matrix_norm(const Matrix& m, NormKind kind);
std::string norm_name(NormKind kind);

// Which norm produces each constant. The defaults reproduce the reference
// constants for the built-in problem: Frobenius everywhere except w0, which
// only matches as a 2-norm.
struct BoundsNormChoices {
    NormKind k0 = NormKind::Frobenius;
    NormKind q0 = NormKind::Frobenius;
    NormKind w0 = NormKind::Two;
    NormKind coeff = NormKind::Frobenius;  // a, b, c, d
};

struct BlockConstants {
    double k0 = 0.0;  // sup ||[[A,B],[C,-D]]|| over [0, interval_end]
    double q0 = 0.0;  // sup ||[A B]|| (horizontal concatenation)
    double w0 = 0.0;  // ||[I_q; Y0]||
};

BlockConstants block_constants(const RiccatiProblem& p, int grid_points,
                               const BoundsNormChoices& norms = {});

struct DeltaResult {
    double delta = 0.0;
    bool unconstrained = false;  // q0*w0 = 0: every positive delta works
};

// Supremum of admissible delta: the root of
//   delta*k0 + log(delta) = -log(q0*w0),
// found by bisection (the left side is strictly increasing). When q0*w0 = 0
// the constraint is void and interval_end is returned with the flag set.
DeltaResult find_delta(double k0, double q0, double w0, double interval_end);

// Solution bound M = (1 - delta q0 exp(delta k0) w0)^{-1} w0 exp(delta k0).
// Throws InadmissibleDeltaError when the denominator is not positive.
double bound_M(double delta, double k0, double q0, double w0);

struct CoefficientSups {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // sups of ||A||,||B||,||C||,||D|| on [0, delta]
};

CoefficientSups coefficient_sups(const RiccatiProblem& p, double delta, int grid_points,
                                 NormKind norm = NormKind::Frobenius);

// Local Lipschitz constant L = a + d + 2 b M of the Riccati field on the
// ball ||Y|| <= M.
double lipschitz_constant(double sup_a, double sup_d, double sup_b, double m);

// ||F(x, Y)|| <= c + N (a + d + b N) whenever ||Y|| <= N.
double field_sup_bound(const CoefficientSups& sups, double n);

// Per-segment invariant-ball radii certifying the fixed-point argument:
// starting from ||T|| <= n1 and the Taylor-data norms at the left knot,
//   n2 = ||S|| + h||S'|| + h^2/2 ||S''|| + h^3/6 n1
//   n3 = field_sup_bound(sups, n2)
//   n4 = (2/h^2)(n3 + ||S'|| + h ||S''||)
//   n  = max(n1, n2, n3, n4, M).
struct SegmentBoundChain {
    double n2 = 0.0, n3 = 0.0, n4 = 0.0, n = 0.0;
};

SegmentBoundChain segment_bound_chain(double value_norm, double d1_norm, double d2_norm, double h,
                                      double n1, const CoefficientSups& sups, double m);

struct RiccatiBounds {
    double k0 = 0.0, q0 = 0.0, w0 = 0.0;
    double delta = 0.0;            // admissible supremum from find_delta
    bool delta_unconstrained = false;
    double delta_used = 0.0;       // delta the bound chain was evaluated at
    double m = 0.0;
    CoefficientSups sups;
    double lipschitz = 0.0;
    BoundsNormChoices norms;
};

// Full pipeline: block constants, admissible delta, solution bound, coefficient
// sups and Lipschitz constant. delta_override (or the problem's delta_hint)
// selects the delta for M and the sups; the reported delta is always the
// admissible supremum.
RiccatiBounds compute_bounds(const RiccatiProblem& p, std::optional<double> delta_override,
                             int grid_points, const BoundsNormChoices& norms = {});

// The Riccati right-hand side as an integrator field.
std::function<Matrix(double, const Matrix&)> riccati_field(const RiccatiProblem& p);

}  // namespace mxspline

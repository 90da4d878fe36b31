#pragma once

#include <array>
#include <string>
#include <vector>

#include "mxspline/matrix.hpp"

#include <json.hpp>

namespace mxspline {

// One cubic piece with matrix coefficients over [x_left, x_left + h],
// stored in the shifted monomial basis:
//   S(x) = c0 + c1*t + c2*t^2 + c3*t^3,  t = x - x_left.
// c0..c2 carry the value and scaled derivatives at the left knot
// (c2 = S''(x_left)/2) and c3 is the solved cubic coefficient.
struct SplineSegment {
    double x_left = 0.0;
    double h = 0.0;
    Matrix c0, c1, c2, c3;

    Matrix at(double t, int order = 0) const;
};

// Coefficients of the same cubic expanded in powers of x instead of
// x - x_left; used when printing per-interval polynomials.
std::array<Matrix, 4> global_coefficients(const SplineSegment& seg);

// Piecewise matrix cubic over a uniform partition of [a, b] into n segments
// with knots a + k*h, h = (b-a)/n. Immutable after construction; evaluation
// is pure and thread-safe.
class MatrixSpline {
public:
    MatrixSpline(double a, double b, std::vector<SplineSegment> segments);

    double a() const { return a_; }
    double b() const { return b_; }
    double h() const { return h_; }
    int segment_count() const { return static_cast<int>(segments_.size()); }
    const SplineSegment& segment(int k) const { return segments_[static_cast<std::size_t>(k)]; }
    int rows() const { return segments_.front().c0.rows(); }
    int cols() const { return segments_.front().c0.cols(); }

    // Value (order 0) or analytic first/second derivative of the piece whose
    // half-open interval contains x; the last segment is closed at b.
    // Throws DomainError when x is outside [a, b].
    Matrix eval(double x, int order = 0) const;

    // Index of the segment containing x (same lookup eval uses).
    int segment_index(double x) const;

private:
    double a_, b_, h_;
    std::vector<SplineSegment> segments_;
};

// Maximum jump across interior knots of S, S' and S'' (Frobenius norms).
// The construction forces these to be at fixed-point-tolerance scale; this
// is the diagnostic that proves it for a concrete spline.
struct KnotMismatch {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};
KnotMismatch knot_mismatch(const MatrixSpline& s);

nlohmann::json to_json(const MatrixSpline& s);
MatrixSpline spline_from_json(const nlohmann::json& j);

}  // namespace mxspline

#include "mxspline/spline.hpp"

#include <algorithm>
#include <cmath>

namespace mxspline {

Matrix SplineSegment::at(double t, int order) const {
    switch (order) {
        case 0: return c0 + t * (c1 + t * (c2 + t * c3));
        case 1: return c1 + t * (2.0 * c2 + t * (3.0 * c3));
        case 2: return 2.0 * c2 + t * (6.0 * c3);
        default: throw DomainError("spline eval: order must be 0, 1 or 2");
    }
}

std::array<Matrix, 4> global_coefficients(const SplineSegment& seg) {
    const double x0 = seg.x_left;
    // c0 + c1 (x-x0) + c2 (x-x0)^2 + c3 (x-x0)^3 expanded in powers of x.
    return {
        seg.c0 - x0 * seg.c1 + (x0 * x0) * seg.c2 - (x0 * x0 * x0) * seg.c3,
        seg.c1 - (2.0 * x0) * seg.c2 + (3.0 * x0 * x0) * seg.c3,
        seg.c2 - (3.0 * x0) * seg.c3,
        seg.c3,
    };
}

MatrixSpline::MatrixSpline(double a, double b, std::vector<SplineSegment> segments)
    : a_(a), b_(b), segments_(std::move(segments)) {
    if (segments_.empty()) throw DimensionError("spline needs at least one segment");
    if (!(a < b)) throw DomainError("spline interval must satisfy a < b");
    h_ = (b_ - a_) / static_cast<double>(segments_.size());
    for (const auto& s : segments_) {
        if (!(s.h > 0.0)) throw DomainError("segment width must be positive");
        if (!s.c0.same_shape(s.c1) || !s.c0.same_shape(s.c2) || !s.c0.same_shape(s.c3))
            throw DimensionError("segment coefficients must share dimensions");
    }
}

int MatrixSpline::segment_index(double x) const {
    const int n = segment_count();
    int k = static_cast<int>(std::floor((x - a_) / h_));
    return std::clamp(k, 0, n - 1);
}

Matrix MatrixSpline::eval(double x, int order) const {
    if (x < a_ || x > b_)
        throw DomainError("spline eval: x = " + std::to_string(x) + " outside [" +
                          std::to_string(a_) + ", " + std::to_string(b_) + "]");
    const SplineSegment& seg = segments_[static_cast<std::size_t>(segment_index(x))];
    return seg.at(x - seg.x_left, order);
}

KnotMismatch knot_mismatch(const MatrixSpline& s) {
    KnotMismatch m;
    for (int k = 0; k + 1 < s.segment_count(); ++k) {
        const SplineSegment& left = s.segment(k);
        const SplineSegment& right = s.segment(k + 1);
        for (int order = 0; order <= 2; ++order) {
            const double jump =
                frobenius_norm(right.at(0.0, order) - left.at(left.h, order));
            double& slot = order == 0 ? m.value : (order == 1 ? m.first : m.second);
            slot = std::max(slot, jump);
        }
    }
    return m;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.entries()}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    return Matrix(j.at("rows").get<int>(), j.at("cols").get<int>(),
                  j.at("data").get<std::vector<double>>());
}

}  // namespace

nlohmann::json to_json(const MatrixSpline& s) {
    nlohmann::json segs = nlohmann::json::array();
    for (int k = 0; k < s.segment_count(); ++k) {
        const SplineSegment& seg = s.segment(k);
        segs.push_back({{"x_left", seg.x_left},
                        {"h", seg.h},
                        {"c0", matrix_to_json(seg.c0)},
                        {"c1", matrix_to_json(seg.c1)},
                        {"c2", matrix_to_json(seg.c2)},
                        {"c3", matrix_to_json(seg.c3)}});
    }
    return {{"a", s.a()}, {"b", s.b()}, {"n", s.segment_count()}, {"segments", segs}};
}

MatrixSpline spline_from_json(const nlohmann::json& j) {
    std::vector<SplineSegment> segs;
    for (const auto& js : j.at("segments")) {
        segs.push_back(SplineSegment{js.at("x_left").get<double>(), js.at("h").get<double>(),
                                     matrix_from_json(js.at("c0")), matrix_from_json(js.at("c1")),
                                     matrix_from_json(js.at("c2")), matrix_from_json(js.at("c3"))});
    }
    if (static_cast<int>(segs.size()) != j.at("n").get<int>())
        throw ConfigError("spline document: segment count does not match n");
    return MatrixSpline(j.at("a").get<double>(), j.at("b").get<double>(), std::move(segs));
}

}  // namespace mxspline

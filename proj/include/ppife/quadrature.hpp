#pragma once

#include "ppife/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ppife {

/// Points and positive weights. Segment rules store the 1D abscissa in
/// `points[i].x` on the reference interval [0,1] until mapped.
struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    int exactness_degree = 0;

    std::size_t size() const { return points.size(); }
    double weight_sum() const;
    void append(const QuadratureRule& other);
};

inline constexpr int kMinRuleDegree = 1;
inline constexpr int kMaxRuleDegree = 10;

/// Gauss-Legendre nodes and weights on [0,1].
QuadratureRule gauss_legendre(int n_points);

/// Reference triangle (0,0),(1,0),(0,1). Collapsed tensor Gauss rule.
QuadratureRule triangle_rule(int degree);
/// Reference square [0,1]^2, tensor Gauss-Legendre.
QuadratureRule rect_rule(int degree);
/// Reference interval [0,1].
QuadratureRule segment_rule(int degree);

QuadratureRule map_triangle(const QuadratureRule& ref, const Point& a, const Point& b, const Point& c);
QuadratureRule map_rect(const QuadratureRule& ref, const Point& lower_left, double hx, double hy);
QuadratureRule map_segment(const QuadratureRule& ref, const Point& p0, const Point& p1);

/// Fan-triangulates a convex polygon from its first vertex and maps a
/// triangle rule onto each fan triangle. Each triangle is further split
/// into 4^refine congruent children. Throws DegeneratePolygon when the area
/// is below 1e-14 * h^2.
QuadratureRule split_polygon_rule(std::span<const Point> poly, int degree, double h, int refine = 0);

/// Gauss rule on the segment [p0,p1], split at `cut` when present.
QuadratureRule split_edge_rule(const Point& p0, const Point& p1, const std::optional<Point>& cut, int degree);

}  // namespace ppife

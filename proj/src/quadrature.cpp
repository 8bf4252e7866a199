#include "ppife/quadrature.hpp"

#include "ppife/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace ppife {

double QuadratureRule::weight_sum() const
{
    double s = 0.0;
    for (double w : weights) {
        s += w;
    }
    return s;
}

void QuadratureRule::append(const QuadratureRule& other)
{
    points.insert(points.end(), other.points.begin(), other.points.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

void check_degree(int degree)
{
    if (degree < kMinRuleDegree || degree > kMaxRuleDegree) {
        throw UnsupportedDegree("quadrature degree " + std::to_string(degree) + " outside [1, 10]");
    }
}

}  // namespace

QuadratureRule gauss_legendre(int n_points)
{
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    QuadratureRule rule;
    rule.exactness_degree = 2 * n_points - 1;
    const int n = n_points;
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
    for (int i = 0; i < n; ++i) {
        rule.points.push_back({0.5 * (x[static_cast<std::size_t>(i)] + 1.0), 0.0});
        rule.weights.push_back(0.5 * w[static_cast<std::size_t>(i)]);
    }
    return rule;
}

QuadratureRule segment_rule(int degree)
{
    check_degree(degree);
    QuadratureRule rule = gauss_legendre((degree + 2) / 2);
    rule.exactness_degree = degree;
    return rule;
}

QuadratureRule rect_rule(int degree)
{
    check_degree(degree);
    const QuadratureRule g = gauss_legendre((degree + 2) / 2);
    QuadratureRule rule;
    rule.exactness_degree = degree;
    for (std::size_t j = 0; j < g.size(); ++j) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            rule.points.push_back({g.points[i].x, g.points[j].x});
            rule.weights.push_back(g.weights[i] * g.weights[j]);
        }
    }
    return rule;
}

QuadratureRule triangle_rule(int degree)
{
    check_degree(degree);
    // Duffy collapse x = s(1-t), y = t: the Jacobian adds one degree in t.
    const QuadratureRule gs = gauss_legendre((degree + 2) / 2);
    const QuadratureRule gt = gauss_legendre((degree + 3) / 2);
    QuadratureRule rule;
    rule.exactness_degree = degree;
    for (std::size_t j = 0; j < gt.size(); ++j) {
        const double t = gt.points[j].x;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const double s = gs.points[i].x;
            rule.points.push_back({s * (1.0 - t), t});
            rule.weights.push_back(gs.weights[i] * gt.weights[j] * (1.0 - t));
        }
    }
    return rule;
}

QuadratureRule map_triangle(const QuadratureRule& ref, const Point& a, const Point& b, const Point& c)
{
    const Vec2 u = b - a;
    const Vec2 v = c - a;
    const double jac = std::abs(cross(u, v));
    QuadratureRule out;
    out.exactness_degree = ref.exactness_degree;
    out.points.reserve(ref.size());
    out.weights.reserve(ref.size());
    for (std::size_t q = 0; q < ref.size(); ++q) {
        out.points.push_back(a + ref.points[q].x * u + ref.points[q].y * v);
        out.weights.push_back(ref.weights[q] * jac);
    }
    return out;
}

QuadratureRule map_rect(const QuadratureRule& ref, const Point& lower_left, double hx, double hy)
{
    QuadratureRule out;
    out.exactness_degree = ref.exactness_degree;
    for (std::size_t q = 0; q < ref.size(); ++q) {
        out.points.push_back({lower_left.x + hx * ref.points[q].x, lower_left.y + hy * ref.points[q].y});
        out.weights.push_back(ref.weights[q] * hx * hy);
    }
    return out;
}

QuadratureRule map_segment(const QuadratureRule& ref, const Point& p0, const Point& p1)
{
    const double len = distance(p0, p1);
    QuadratureRule out;
    out.exactness_degree = ref.exactness_degree;
    for (std::size_t q = 0; q < ref.size(); ++q) {
        out.points.push_back(lerp(p0, p1, ref.points[q].x));
        out.weights.push_back(ref.weights[q] * len);
    }
    return out;
}

namespace {

void append_refined(QuadratureRule& out, const QuadratureRule& ref, const Point& a, const Point& b,
                    const Point& c, int levels)
{
    if (levels == 0) {
        out.append(map_triangle(ref, a, b, c));
        return;
    }
    const Point ab = 0.5 * (a + b);
    const Point bc = 0.5 * (b + c);
    const Point ca = 0.5 * (c + a);
    append_refined(out, ref, a, ab, ca, levels - 1);
    append_refined(out, ref, ab, b, bc, levels - 1);
    append_refined(out, ref, ca, bc, c, levels - 1);
    append_refined(out, ref, ab, bc, ca, levels - 1);
}

}  // namespace

QuadratureRule split_polygon_rule(std::span<const Point> poly, int degree, double h, int refine)
{
    if (poly.size() < 3) {
        throw DegeneratePolygon("polygon needs at least 3 vertices");
    }
    const double area = std::abs(polygon_area(poly));
    if (area < 1e-14 * h * h) {
        throw DegeneratePolygon("polygon area " + std::to_string(area) + " below tolerance");
    }
    const QuadratureRule ref = triangle_rule(degree);
    QuadratureRule out;
    out.exactness_degree = degree;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        // Skip zero-area fan triangles produced by repeated or collinear vertices.
        if (std::abs(cross(poly[i] - poly[0], poly[i + 1] - poly[0])) <= 1e-300) {
            continue;
        }
        append_refined(out, ref, poly[0], poly[i], poly[i + 1], refine);
    }
    return out;
}

QuadratureRule split_edge_rule(const Point& p0, const Point& p1, const std::optional<Point>& cut, int degree)
{
    const QuadratureRule ref = segment_rule(degree);
    if (!cut) {
        return map_segment(ref, p0, p1);
    }
    QuadratureRule out;
    out.exactness_degree = degree;
    if (distance(p0, *cut) > 0.0) {
        out.append(map_segment(ref, p0, *cut));
    }
    if (distance(*cut, p1) > 0.0) {
        out.append(map_segment(ref, *cut, p1));
    }
    return out;
}

}  // namespace ppife

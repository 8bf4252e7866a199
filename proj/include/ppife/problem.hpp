#pragma once

#include "ppife/geometry.hpp"
#include "ppife/types.hpp"

#include <array>
#include <functional>
#include <string>

namespace ppife {

/// Closed-form piecewise solution of -div(beta grad u) = f with its data.
/// Index 0 holds the minus-side piece, index 1 the plus-side piece.
struct ManufacturedSolution {
    std::array<std::function<double(const Point&)>, 2> u;
    std::array<std::function<Vec2(const Point&)>, 2> grad;
    std::array<std::function<double(const Point&)>, 2> f;
    std::array<std::function<double(const Point&)>, 2> laplacian;  // for W^{2,inf}-type diagnostics
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    double exponent = 0.0;
    double radius = 0.0;
    std::string name;

    double value(const Point& p, Side s) const { return u[static_cast<std::size_t>(side_index(s))](p); }
    Vec2 gradient(const Point& p, Side s) const { return grad[static_cast<std::size_t>(side_index(s))](p); }
    double source(const Point& p, Side s) const { return f[static_cast<std::size_t>(side_index(s))](p); }
    double beta(Side s) const { return s == Side::Minus ? beta_minus : beta_plus; }

    /// u = r^a / beta- inside the circle r = r0 centred at the origin and
    /// u = r^a / beta+ + (1/beta- - 1/beta+) r0^a outside, so that [u] = 0 on the circle.
    static ManufacturedSolution circle_power(double exponent, double r0, double beta_minus, double beta_plus);

    /// u = a + b x + c y + d x y on both sides (f = 0).
    static ManufacturedSolution polynomial(double a, double b, double c, double d, double beta);
};

/// r0 = pi / 6.28, the interface radius used in the benchmark problem.
double benchmark_radius();

}  // namespace ppife

#include "ppife/discretization.hpp"

#include "ppife/problem.hpp"

#include <cmath>
#include <numbers>

namespace ppife {

ManufacturedSolution ManufacturedSolution::circle_power(double exponent, double r0, double beta_minus,
                                                        double beta_plus)
{
    ManufacturedSolution s;
    s.beta_minus = beta_minus;
    s.beta_plus = beta_plus;
    s.exponent = exponent;
    s.radius = r0;
    s.name = "circle_power";
    const double a = exponent;
    const double shift = (1.0 / beta_minus - 1.0 / beta_plus) * std::pow(r0, exponent);
    const std::array<double, 2> betas{beta_minus, beta_plus};
    for (std::size_t k = 0; k < 2; ++k) {
        const double b = betas[k];
        const double c = k == 0 ? 0.0 : shift;
        s.u[k] = [a, b, c](const Point& p) { return std::pow(p.x * p.x + p.y * p.y, 0.5 * a) / b + c; };
        s.grad[k] = [a, b](const Point& p) {
            const double r2 = p.x * p.x + p.y * p.y;
            const double g = a * std::pow(r2, 0.5 * a - 1.0) / b;
            return Vec2{g * p.x, g * p.y};
        };
        // Laplacian of r^a in 2D is a^2 r^(a-2); f = -beta * laplacian(u).
        s.laplacian[k] = [a, b](const Point& p) {
            return a * a * std::pow(p.x * p.x + p.y * p.y, 0.5 * a - 1.0) / b;
        };
        s.f[k] = [a](const Point& p) { return -a * a * std::pow(p.x * p.x + p.y * p.y, 0.5 * a - 1.0); };
    }
    return s;
}

ManufacturedSolution ManufacturedSolution::polynomial(double a, double b, double c, double d, double beta)
{
    ManufacturedSolution s;
    s.beta_minus = beta;
    s.beta_plus = beta;
    s.name = "polynomial";
    for (std::size_t k = 0; k < 2; ++k) {
        s.u[k] = [=](const Point& p) { return a + b * p.x + c * p.y + d * p.x * p.y; };
        s.grad[k] = [=](const Point& p) { return Vec2{b + d * p.y, c + d * p.x}; };
        s.laplacian[k] = [](const Point&) { return 0.0; };
        s.f[k] = [](const Point&) { return 0.0; };
    }
    return s;
}

double benchmark_radius()
{
    return std::numbers::pi / 6.28;
}

int Discretization::num_interface_elements() const
{
    int n = 0;
    for (const auto& c : cuts) {
        n += c.interface ? 1 : 0;
    }
    return n;
}

double Discretization::eval(std::span<const double> coeffs, int e, const Point& p, Side piece) const
{
    const auto& basis = bases[static_cast<std::size_t>(e)];
    const auto ids = mesh.element_nodes(e);
    double v = 0.0;
    for (int j = 0; j < basis.n_dofs; ++j) {
        v += coeffs[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])] * basis.value(j, p, piece);
    }
    return v;
}

Vec2 Discretization::eval_gradient(std::span<const double> coeffs, int e, const Point& p, Side piece) const
{
    const auto& basis = bases[static_cast<std::size_t>(e)];
    const auto ids = mesh.element_nodes(e);
    Vec2 g;
    for (int j = 0; j < basis.n_dofs; ++j) {
        g += coeffs[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])] * basis.gradient(j, p, piece);
    }
    return g;
}

Discretization discretize(const DomainSpec& domain, const InterfaceGeometry& iface, double beta_minus,
                          double beta_plus)
{
    if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) {
        throw ConfigError("beta-minus and beta-plus must be positive");
    }
    Discretization d;
    d.domain = domain;
    d.mesh = build_mesh(domain);
    d.iface = iface;
    d.beta_minus = beta_minus;
    d.beta_plus = beta_plus;
    d.cuts = classify_elements(d.mesh, iface);
    d.edges = classify_edges(d.mesh, d.cuts);
    d.bases = build_all_bases(d.mesh, d.cuts, beta_minus, beta_plus);
    return d;
}

std::vector<PieceRule> element_rules(const Discretization& disc, int e, int degree, int refine)
{
    const auto& mesh = disc.mesh;
    const auto& cut = disc.cuts[static_cast<std::size_t>(e)];
    std::vector<PieceRule> out;
    if (!cut.interface) {
        PieceRule pr;
        pr.side = cut.side;
        if (mesh.kind == CellKind::Rectangular) {
            pr.rule = map_rect(rect_rule(degree), mesh.vertex(e, 0), mesh.h, mesh.hy);
        } else {
            pr.rule = map_triangle(triangle_rule(degree), mesh.vertex(e, 0), mesh.vertex(e, 1), mesh.vertex(e, 2));
        }
        out.push_back(std::move(pr));
        return out;
    }
    for (Side s : {Side::Minus, Side::Plus}) {
        try {
            out.push_back({split_polygon_rule(cut.sub(s), degree, mesh.h, refine), s});
        } catch (const DegeneratePolygon&) {
            // Sliver carries no measurable weight.
        }
    }
    return out;
}

}  // namespace ppife

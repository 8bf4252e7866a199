#include "ppife/ife_local.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace ppife {

namespace {

struct LocalFrame {
    Point origin;
    double hx = 1.0;
    double hy = 1.0;

    explicit LocalFrame(std::span<const Point> vertices)
    {
        double xmin = vertices[0].x, xmax = vertices[0].x;
        double ymin = vertices[0].y, ymax = vertices[0].y;
        for (const auto& v : vertices) {
            xmin = std::min(xmin, v.x);
            xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y);
            ymax = std::max(ymax, v.y);
        }
        origin = {xmin, ymin};
        hx = xmax - xmin;
        hy = ymax - ymin;
    }

    Point scaled(const Point& p) const { return {(p.x - origin.x) / hx, (p.y - origin.y) / hy}; }

    PieceCoeffs unscale(double c1, double c2, double c3, double c4) const
    {
        return {c1, c2 / hx, c3 / hy, c4 / (hx * hy)};
    }
};

void check_vertices(std::span<const Point> vertices)
{
    if (vertices.size() != 3 && vertices.size() != 4) {
        throw Error("local basis needs 3 or 4 vertices");
    }
}

Side chord_side(const Chord& chord, const Point& p, double h)
{
    return dot(chord.normal, p - chord.D) > 1e-13 * h ? Side::Plus : Side::Minus;
}

// Solves M X = I with partial pivoting, one refinement sweep and a
// condition check. Columns of X are the per-basis-function coefficients.
Eigen::MatrixXd solve_local_system(const Eigen::MatrixXd& M, const Eigen::MatrixXd& rhs)
{
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        throw SingularLocalSystem("local IFE system condition estimate exceeds 1e14 (rcond=" +
                                  std::to_string(rcond) + ")");
    }
    Eigen::MatrixXd X = lu.solve(rhs);
    const Eigen::MatrixXd R = rhs - M * X;
    X += lu.solve(R);
    const double residual = (rhs - M * X).cwiseAbs().maxCoeff();
    if (!(residual < 1e-12)) {
        throw SingularLocalSystem("local IFE system residual " + std::to_string(residual) + " after solve");
    }
    return X;
}

}  // namespace

Side LocalIFEBasis::piece_at(const Point& p) const
{
    if (!cut) {
        return Side::Minus;
    }
    return chord_side(chord, p, h);
}

double LocalIFEBasis::value(int j, const Point& p, Side s) const
{
    const auto& c = coeffs(j, s);
    const double x = p.x - origin.x;
    const double y = p.y - origin.y;
    return c[0] + c[1] * x + c[2] * y + c[3] * x * y;
}

Vec2 LocalIFEBasis::gradient(int j, const Point& p, Side s) const
{
    const auto& c = coeffs(j, s);
    const double x = p.x - origin.x;
    const double y = p.y - origin.y;
    return {c[1] + c[3] * y, c[2] + c[3] * x};
}

double eval_basis(const LocalIFEBasis& basis, int j, const Point& p)
{
    return basis.value(j, p, basis.piece_at(p));
}

Vec2 grad_basis(const LocalIFEBasis& basis, int j, const Point& p)
{
    return basis.gradient(j, p, basis.piece_at(p));
}

LocalIFEBasis build_standard_basis(std::span<const Point> vertices)
{
    check_vertices(vertices);
    const LocalFrame frame(vertices);
    const int n = static_cast<int>(vertices.size());
    Eigen::MatrixXd V(n, n);
    for (int i = 0; i < n; ++i) {
        const Point q = frame.scaled(vertices[static_cast<std::size_t>(i)]);
        V(i, 0) = 1.0;
        V(i, 1) = q.x;
        V(i, 2) = q.y;
        if (n == 4) {
            V(i, 3) = q.x * q.y;
        }
    }
    const Eigen::MatrixXd X = solve_local_system(V, Eigen::MatrixXd::Identity(n, n));

    LocalIFEBasis basis;
    basis.kind = n == 3 ? BasisKind::StandardLinear : BasisKind::StandardBilinear;
    basis.n_dofs = n;
    basis.origin = frame.origin;
    basis.h = std::max(frame.hx, frame.hy);
    for (int j = 0; j < n; ++j) {
        const PieceCoeffs c = frame.unscale(X(0, j), X(1, j), X(2, j), n == 4 ? X(3, j) : 0.0);
        basis.minus[static_cast<std::size_t>(j)] = c;
        basis.plus[static_cast<std::size_t>(j)] = c;
    }
    return basis;
}

LocalIFEBasis build_linear_ife_basis(std::span<const Point> vertices, const Chord& chord,
                                     double beta_minus, double beta_plus)
{
    if (vertices.size() != 3) {
        throw Error("linear IFE basis needs a triangle");
    }
    if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) {
        throw Error("diffusion coefficients must be positive");
    }
    const LocalFrame frame(vertices);
    const double h = std::max(frame.hx, frame.hy);
    const double beta_max = std::max(beta_minus, beta_plus);

    // Unknowns: (c1-, c2-, c3-, c1+, c2+, c3+) in scaled coordinates.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(6, 6);
    for (int i = 0; i < 3; ++i) {
        const Point& v = vertices[static_cast<std::size_t>(i)];
        const Point q = frame.scaled(v);
        const int off = chord_side(chord, v, h) == Side::Minus ? 0 : 3;
        M(i, off + 0) = 1.0;
        M(i, off + 1) = q.x;
        M(i, off + 2) = q.y;
    }
    const std::array<Point, 2> ends{chord.D, chord.E};
    for (int k = 0; k < 2; ++k) {
        const Point q = frame.scaled(ends[static_cast<std::size_t>(k)]);
        M(3 + k, 0) = 1.0;
        M(3 + k, 1) = q.x;
        M(3 + k, 2) = q.y;
        M(3 + k, 3) = -1.0;
        M(3 + k, 4) = -q.x;
        M(3 + k, 5) = -q.y;
    }
    // Flux row, scaled by h / beta_max.
    const double nx = chord.normal.x * h / frame.hx;
    const double ny = chord.normal.y * h / frame.hy;
    M(5, 1) = beta_minus / beta_max * nx;
    M(5, 2) = beta_minus / beta_max * ny;
    M(5, 4) = -beta_plus / beta_max * nx;
    M(5, 5) = -beta_plus / beta_max * ny;

    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(6, 3);
    rhs.topRows(3) = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::MatrixXd X = solve_local_system(M, rhs);

    LocalIFEBasis basis;
    basis.kind = BasisKind::IFELinear;
    basis.n_dofs = 3;
    basis.origin = frame.origin;
    basis.h = h;
    basis.cut = true;
    basis.chord = chord;
    for (int j = 0; j < 3; ++j) {
        basis.minus[static_cast<std::size_t>(j)] = frame.unscale(X(0, j), X(1, j), X(2, j), 0.0);
        basis.plus[static_cast<std::size_t>(j)] = frame.unscale(X(3, j), X(4, j), X(5, j), 0.0);
    }
    return basis;
}

LocalIFEBasis build_bilinear_ife_basis(std::span<const Point> vertices, const Chord& chord,
                                       double beta_minus, double beta_plus)
{
    if (vertices.size() != 4) {
        throw Error("bilinear IFE basis needs a rectangle");
    }
    if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) {
        throw Error("diffusion coefficients must be positive");
    }
    const LocalFrame frame(vertices);
    const double h = std::max(frame.hx, frame.hy);
    const double beta_max = std::max(beta_minus, beta_plus);

    // Unknowns: (c1-, c2-, c3-, c1+, c2+, c3+, c4) in scaled coordinates.
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(7, 7);
    for (int i = 0; i < 4; ++i) {
        const Point& v = vertices[static_cast<std::size_t>(i)];
        const Point q = frame.scaled(v);
        const int off = chord_side(chord, v, h) == Side::Minus ? 0 : 3;
        M(i, off + 0) = 1.0;
        M(i, off + 1) = q.x;
        M(i, off + 2) = q.y;
        M(i, 6) = q.x * q.y;
    }
    const std::array<Point, 2> ends{chord.D, chord.E};
    for (int k = 0; k < 2; ++k) {
        const Point q = frame.scaled(ends[static_cast<std::size_t>(k)]);
        M(4 + k, 0) = 1.0;
        M(4 + k, 1) = q.x;
        M(4 + k, 2) = q.y;
        M(4 + k, 3) = -1.0;
        M(4 + k, 4) = -q.x;
        M(4 + k, 5) = -q.y;
    }
    // Mean normal flux jump over DE; the gradient is affine along DE so its
    // mean is the midpoint value.
    const Point mid = frame.scaled(0.5 * (chord.D + chord.E));
    const double nx = chord.normal.x * h / frame.hx;
    const double ny = chord.normal.y * h / frame.hy;
    M(6, 1) = beta_minus / beta_max * nx;
    M(6, 2) = beta_minus / beta_max * ny;
    M(6, 4) = -beta_plus / beta_max * nx;
    M(6, 5) = -beta_plus / beta_max * ny;
    M(6, 6) = (beta_minus - beta_plus) / beta_max * (mid.y * nx + mid.x * ny);

    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(7, 4);
    rhs.topRows(4) = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::MatrixXd X = solve_local_system(M, rhs);

    LocalIFEBasis basis;
    basis.kind = BasisKind::IFEBilinear;
    basis.n_dofs = 4;
    basis.origin = frame.origin;
    basis.h = h;
    basis.cut = true;
    basis.chord = chord;
    for (int j = 0; j < 4; ++j) {
        basis.minus[static_cast<std::size_t>(j)] = frame.unscale(X(0, j), X(1, j), X(2, j), X(6, j));
        basis.plus[static_cast<std::size_t>(j)] = frame.unscale(X(3, j), X(4, j), X(5, j), X(6, j));
    }
    return basis;
}

LocalIFEBasis build_element_basis(const CartesianMesh& mesh, const ElementCut& cut,
                                  double beta_minus, double beta_plus)
{
    const auto poly = mesh.element_polygon(cut.element);
    LocalIFEBasis basis;
    if (!cut.interface) {
        basis = build_standard_basis(poly);
    } else if (mesh.kind == CellKind::Triangular) {
        basis = build_linear_ife_basis(poly, Chord::from_cut(cut), beta_minus, beta_plus);
    } else {
        basis = build_bilinear_ife_basis(poly, Chord::from_cut(cut), beta_minus, beta_plus);
    }
    basis.element = cut.element;
    return basis;
}

std::vector<LocalIFEBasis> build_all_bases(const CartesianMesh& mesh, std::span<const ElementCut> cuts,
                                           double beta_minus, double beta_plus)
{
    std::vector<LocalIFEBasis> bases;
    bases.reserve(cuts.size());
    for (const auto& cut : cuts) {
        try {
            bases.push_back(build_element_basis(mesh, cut, beta_minus, beta_plus));
        } catch (const SingularLocalSystem& ex) {
            throw SingularLocalSystem("element " + std::to_string(cut.element) + ": " + ex.what());
        }
    }
    return bases;
}

double BasisResiduals::max() const
{
    return std::max({kronecker, continuity, flux, partition_of_unity});
}

BasisResiduals basis_residuals(const LocalIFEBasis& basis, std::span<const Point> vertices,
                               double beta_minus, double beta_plus)
{
    BasisResiduals r;
    const int n = basis.n_dofs;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Point& v = vertices[static_cast<std::size_t>(i)];
            const double target = i == j ? 1.0 : 0.0;
            r.kronecker = std::max(r.kronecker, std::abs(eval_basis(basis, j, v) - target));
        }
        if (!basis.cut) {
            continue;
        }
        for (const Point& p : {basis.chord.D, basis.chord.E}) {
            r.continuity = std::max(r.continuity,
                                    std::abs(basis.value(j, p, Side::Minus) - basis.value(j, p, Side::Plus)));
        }
        const Point mid = 0.5 * (basis.chord.D + basis.chord.E);
        const double jump = beta_minus * dot(basis.gradient(j, mid, Side::Minus), basis.chord.normal) -
                            beta_plus * dot(basis.gradient(j, mid, Side::Plus), basis.chord.normal);
        const double scale = basis.kind == BasisKind::IFEBilinear ? distance(basis.chord.D, basis.chord.E) : 1.0;
        r.flux = std::max(r.flux, std::abs(jump) * scale);
    }
    for (Side s : {Side::Minus, Side::Plus}) {
        PieceCoeffs sum{};
        for (int j = 0; j < n; ++j) {
            const auto& c = basis.coeffs(j, s);
            for (std::size_t k = 0; k < 4; ++k) {
                sum[k] += c[k];
            }
        }
        r.partition_of_unity = std::max({r.partition_of_unity, std::abs(sum[0] - 1.0), std::abs(sum[1]),
                                         std::abs(sum[2]), std::abs(sum[3])});
    }
    return r;
}

}  // namespace ppife

#include "ppife/ife_local.hpp"
#include "ppife/quadrature.hpp"
#include "ppife/verify.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

using namespace ppife;

namespace {

// Closed-form map from minus to plus coefficients of a linear IFE function on
// the triangle (0,0),(h,0),(0,h) with D = (0, d h), E = (e h, 0).
Eigen::Matrix3d linear_transfer(double d, double e, double h, double bm, double bp)
{
    const double s = d * d + e * e;
    const double gm[3][3] = {{0, -d * d * e * h, -d * e * e * h}, {0, d * d, d * e}, {0, d * e, e * e}};
    const double gp[3][3] = {{s, d * d * e * h, d * e * e * h}, {0, e * e, -d * e}, {0, -d * e, d * d}};
    Eigen::Matrix3d F;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            F(i, j) = gm[i][j] * bm / (bp * s) + gp[i][j] * bp / (bp * s);
        }
    }
    return F;
}

Eigen::Vector3d linear_part(const PieceCoeffs& c) { return {c[0], c[1], c[2]}; }

double fd_check(const LocalIFEBasis& b, int j, const Point& p, Side s)
{
    const double eps = 1e-6 * b.h;
    const Vec2 g = b.gradient(j, p, s);
    const double gx = (b.value(j, {p.x + eps, p.y}, s) - b.value(j, {p.x - eps, p.y}, s)) / (2 * eps);
    const double gy = (b.value(j, {p.x, p.y + eps}, s) - b.value(j, {p.x, p.y - eps}, s)) / (2 * eps);
    return std::max(std::abs(gx - g.x), std::abs(gy - g.y));
}

}  // namespace

TEST(StandardBasis, LinearNodalAndPartitionOfUnity)
{
    const std::vector<Point> tri{{0.2, 0.1}, {0.7, 0.1}, {0.2, 0.6}};
    const auto b = build_standard_basis(tri);
    EXPECT_EQ(b.kind, BasisKind::StandardLinear);
    EXPECT_FALSE(b.cut);
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            EXPECT_NEAR(eval_basis(b, j, tri[static_cast<std::size_t>(i)]), i == j ? 1.0 : 0.0, 1e-14);
        }
    }
    const Point p{0.3, 0.25};
    double s = 0.0;
    Vec2 g;
    for (int j = 0; j < 3; ++j) {
        s += eval_basis(b, j, p);
        g += grad_basis(b, j, p);
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_NEAR(norm(g), 0.0, 1e-12);
    EXPECT_NEAR(grad_basis(b, 1, p).x, 2.0, 1e-12);
}

TEST(StandardBasis, BilinearValues)
{
    const std::vector<Point> sq{{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
    const auto b = build_standard_basis(sq);
    EXPECT_EQ(b.kind, BasisKind::StandardBilinear);
    EXPECT_NEAR(eval_basis(b, 0, {0.25, 0.25}), 0.25, 1e-15);
    EXPECT_NEAR(eval_basis(b, 2, {0.5, 0.25}), 0.5, 1e-15);
    // phi_2 = x y / h^2, grad at (0.25, 0.1) = (0.4, 1.0)
    const Vec2 g = grad_basis(b, 2, {0.25, 0.1});
    EXPECT_NEAR(g.x, 0.4, 1e-14);
    EXPECT_NEAR(g.y, 1.0, 1e-14);
}

TEST(LinearIFE, MatchesClosedFormTransfer)
{
    const double h = 0.25;
    for (auto [bm, bp] : {std::pair{1.0, 10.0}, std::pair{1.0, 1e4}, std::pair{10.0, 1.0}}) {
        for (double d : {0.01, 0.3, 0.8, 0.99}) {
            for (double e : {0.05, 0.5, 0.97}) {
                const auto cut = reference_cut(CellKind::Triangular, CutType::TypeI, d, e, h);
                ASSERT_NEAR(cut.chord.D.y, d * h, 1e-15);
                ASSERT_NEAR(cut.chord.E.x, e * h, 1e-15);
                const auto b = build_reference_basis(cut, bm, bp);
                ASSERT_TRUE(b.cut);
                const Eigen::Matrix3d F = linear_transfer(d, e, h, bm, bp);
                for (int j = 0; j < 3; ++j) {
                    const Eigen::Vector3d cm = linear_part(b.coeffs(j, Side::Minus));
                    const Eigen::Vector3d cp = linear_part(b.coeffs(j, Side::Plus));
                    const double scale = std::max(1.0, cp.cwiseAbs().maxCoeff());
                    EXPECT_LT((cp - F * cm).cwiseAbs().maxCoeff(), 1e-10 * scale)
                        << "d=" << d << " e=" << e << " j=" << j << " beta=" << bp;
                }
            }
        }
    }
}

TEST(LinearIFE, ReproducesInterfaceLinears)
{
    // u- arbitrary linear; u+ fixed by continuity on DE and flux continuity.
    const double bm = 1.0;
    const double bp = 7.0;
    const auto cut = reference_cut(CellKind::Triangular, CutType::TypeI, 0.4, 0.65, 1.0, 1, true);
    const auto b = build_reference_basis(cut, bm, bp);
    const Point D = cut.chord.D;
    const Point E = cut.chord.E;
    const Vec2 n = cut.chord.normal;
    const Vec2 t = E - D;
    const Vec2 gm{0.3, -1.2};
    const double um_D = 0.5;
    // grad u+ = grad u- + a n with beta+ (gm + a n).n = beta- gm.n
    const double a = (bm - bp) * dot(gm, n) / bp;
    const Vec2 gp = gm + a * n;
    EXPECT_NEAR(dot(gp - gm, t), 0.0, 1e-14);
    auto exact = [&](const Point& p) {
        const Vec2 g = dot(p - D, n) < 0.0 ? gm : gp;
        return um_D + dot(g, p - D);
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        double x = U(rng), y = U(rng);
        if (x + y > 1.0) {
            x = 1.0 - x;
            y = 1.0 - y;
        }
        const Point p{x, y};
        double v = 0.0;
        for (int j = 0; j < 3; ++j) v += exact(cut.vertices[static_cast<std::size_t>(j)]) * eval_basis(b, j, p);
        EXPECT_NEAR(v, exact(p), 1e-12);
    }
}

TEST(BilinearIFE, ConstraintResidualsVanish)
{
    std::mt19937_64 rng(2024);
    for (auto [bm, bp] : {std::pair{1.0, 10.0}, std::pair{1.0, 1e4}, std::pair{10.0, 1.0}}) {
        for (int k = 0; k < 200; ++k) {
            const auto cut = random_cut(CellKind::Rectangular, rng, 0.1);
            const auto b = build_reference_basis(cut, bm, bp);
            EXPECT_EQ(b.kind, BasisKind::IFEBilinear);
            const auto res = basis_residuals(b, cut.vertices, bm, bp);
            EXPECT_LT(res.max(), 1e-9);
            for (int j = 0; j < 4; ++j) {
                EXPECT_EQ(b.coeffs(j, Side::Minus)[3], b.coeffs(j, Side::Plus)[3]);
            }
        }
    }
}

TEST(BilinearIFE, IndependentConstraintCheck)
{
    const double bm = 1.0;
    const double bp = 10.0;
    for (CutType type : {CutType::TypeI, CutType::TypeII}) {
        for (int v = 0; v < 4; ++v) {
            const auto cut = reference_cut(CellKind::Rectangular, type, 0.37, 0.71, 0.5, v, v % 2 == 1);
            const auto b = build_reference_basis(cut, bm, bp);
            const auto rule = map_segment(gauss_legendre(4), cut.chord.D, cut.chord.E);
            for (int j = 0; j < 4; ++j) {
                for (int i = 0; i < 4; ++i) {
                    EXPECT_NEAR(eval_basis(b, j, cut.vertices[static_cast<std::size_t>(i)]), i == j ? 1.0 : 0.0,
                                1e-12);
                }
                double flux = 0.0;
                double scale = 0.0;
                for (std::size_t q = 0; q < rule.size(); ++q) {
                    const Point& p = rule.points[q];
                    EXPECT_NEAR(b.value(j, p, Side::Minus), b.value(j, p, Side::Plus), 1e-12);
                    const double fm = bm * dot(b.gradient(j, p, Side::Minus), cut.chord.normal);
                    const double fp = bp * dot(b.gradient(j, p, Side::Plus), cut.chord.normal);
                    flux += rule.weights[q] * (fp - fm);
                    scale += rule.weights[q] * std::abs(fp);
                }
                EXPECT_LT(std::abs(flux), 1e-12 * std::max(1.0, scale));
            }
        }
    }
}

TEST(IFEBasis, EqualCoefficientsGiveStandardBasis)
{
    for (CellKind kind : {CellKind::Triangular, CellKind::Rectangular}) {
        const auto cut = reference_cut(kind, CutType::TypeI, 0.3, 0.6, 0.2, 1);
        const auto ife = build_reference_basis(cut, 3.0, 3.0);
        const auto std_basis = build_standard_basis(cut.vertices);
        for (int j = 0; j < ife.n_dofs; ++j) {
            for (Side s : {Side::Minus, Side::Plus}) {
                for (int k = 0; k < 4; ++k) {
                    EXPECT_NEAR(ife.coeffs(j, s)[static_cast<std::size_t>(k)],
                                std_basis.coeffs(j, Side::Minus)[static_cast<std::size_t>(k)], 1e-10);
                }
            }
        }
    }
}

TEST(IFEBasis, PartitionOfUnityAndGradientConsistency)
{
    std::mt19937_64 rng(99);
    for (CellKind kind : {CellKind::Triangular, CellKind::Rectangular}) {
        for (int k = 0; k < 50; ++k) {
            const auto cut = random_cut(kind, rng, 0.05);
            const auto b = build_reference_basis(cut, 1.0, 100.0);
            const auto res = basis_residuals(b, cut.vertices, 1.0, 100.0);
            EXPECT_LT(res.partition_of_unity, 1e-10);
            const Point c = lerp(cut.chord.D, cut.chord.E, 0.5);
            for (int j = 0; j < b.n_dofs; ++j) {
                for (Side s : {Side::Minus, Side::Plus}) {
                    EXPECT_LT(fd_check(b, j, c, s), 1e-6);
                }
            }
        }
    }
}

TEST(IFEBasis, PieceSelectionFollowsChord)
{
    const auto cut = reference_cut(CellKind::Rectangular, CutType::TypeII, 0.5, 0.5, 1.0);
    const auto b = build_reference_basis(cut, 1.0, 10.0);
    const Point mid = lerp(cut.chord.D, cut.chord.E, 0.5);
    EXPECT_EQ(b.piece_at(mid), Side::Minus);
    EXPECT_EQ(b.piece_at(mid + 0.1 * cut.chord.normal), Side::Plus);
    EXPECT_EQ(b.piece_at(mid - 0.1 * cut.chord.normal), Side::Minus);
}

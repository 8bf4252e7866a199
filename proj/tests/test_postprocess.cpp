#include "ppife/assembly.hpp"
#include "ppife/postprocess.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace ppife;

namespace {

Discretization make(int N, CellKind kind, double bm = 1.0, double bp = 10.0)
{
    DomainSpec d;
    d.N = N;
    d.cell_kind = kind;
    return discretize(d, InterfaceGeometry::circle(0, 0, benchmark_radius()), bm, bp);
}

}  // namespace

TEST(Rates, LogRatioFormula)
{
    const std::vector<std::pair<int, double>> e{{20, 6.4751e-2}, {40, 3.2656e-2}, {80, 8.1241e-3}};
    const auto r = convergence_rates(e);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], 0.9876, 1e-4);
    EXPECT_NEAR(r[1], 2.0071, 1e-4);
    EXPECT_NEAR(r[0], std::log(6.4751e-2 / 3.2656e-2) / std::log(2.0), 1e-14);
}

TEST(Errors, InterpolantOfPolynomialIsExact)
{
    const auto p = ManufacturedSolution::polynomial(1.0, 0.5, -2.0, 0.75, 1.0);
    DomainSpec d;
    d.N = 6;
    d.cell_kind = CellKind::Rectangular;
    const auto disc = discretize(d, InterfaceGeometry::circle(0, 0, 10.0), 1.0, 1.0);
    const auto I = nodal_interpolant(disc, p);
    const auto e = compute_errors(disc, MethodParams{}, I, p);
    EXPECT_LT(e.l2, 1e-14);
    EXPECT_LT(e.h1, 1e-13);
    EXPECT_LT(e.linf, 1e-14);
}

TEST(Errors, ConstantOffsetHasKnownNorms)
{
    const auto p = ManufacturedSolution::polynomial(0.0, 0.0, 0.0, 0.0, 1.0);
    const auto disc = make(4, CellKind::Triangular, 1.0, 1.0);
    const std::vector<double> ones(static_cast<std::size_t>(disc.mesh.num_nodes()), 0.5);
    EXPECT_NEAR(l2_error(disc, ones, p), 0.5 * 2.0, 1e-13);
    EXPECT_NEAR(h1_semi_error(disc, ones, p), 0.0, 1e-13);
    EXPECT_NEAR(linf_error(disc, ones, p), 0.5, 1e-15);
}

TEST(Errors, RefinementLevelsAgree)
{
    const auto exact = ManufacturedSolution::circle_power(5.0, benchmark_radius(), 1.0, 10.0);
    for (CellKind k : {CellKind::Triangular, CellKind::Rectangular}) {
        const auto disc = make(20, k);
        const auto sol = solve_problem(disc, MethodParams::preset(Scheme::SPP, 1.0, 10.0), exact);
        const double a = l2_error(disc, sol.coeffs, exact, 1);
        const double b = l2_error(disc, sol.coeffs, exact, 2);
        EXPECT_NEAR(a, b, 0.01 * b);
        const double c = h1_semi_error(disc, sol.coeffs, exact, 1);
        const double d = h1_semi_error(disc, sol.coeffs, exact, 2);
        EXPECT_NEAR(c, d, 0.01 * d);
    }
}

TEST(Errors, InterpolationErrorConvergesAtExpectedOrder)
{
    const auto exact = ManufacturedSolution::circle_power(5.0, benchmark_radius(), 1.0, 10.0);
    std::vector<std::pair<int, double>> l2, h1;
    for (int N : {10, 20, 40}) {
        const auto disc = make(N, CellKind::Rectangular);
        const auto I = nodal_interpolant(disc, exact);
        l2.emplace_back(N, l2_error(disc, I, exact));
        h1.emplace_back(N, h1_semi_error(disc, I, exact));
    }
    const auto rl = convergence_rates(l2);
    const auto rh = convergence_rates(h1);
    EXPECT_GT(rl.back(), 1.8);
    EXPECT_GT(rh.back(), 0.9);
}

TEST(Locate, FindsContainingElement)
{
    const auto disc = make(4, CellKind::Triangular);
    const int e = locate_element(disc.mesh, {-0.9, -0.1});
    const auto poly = disc.mesh.element_polygon(e);
    EXPECT_NEAR(poly[0].x, -1.0, 1e-15);
    EXPECT_NEAR(poly[0].y, -0.5, 1e-15);
    EXPECT_EQ(locate_element(disc.mesh, {-1.0, -1.0}), 0);
    // The top-right corner is shared by the last two triangles.
    EXPECT_EQ(locate_element(disc.mesh, {1.0, 1.0}), disc.mesh.num_elements() - 2);
}

TEST(Field, GridSizeAndCsv)
{
    const auto p = ManufacturedSolution::polynomial(1.0, 0.0, 0.0, 0.0, 1.0);
    const auto disc = make(4, CellKind::Rectangular, 1.0, 1.0);
    const std::vector<double> zero(static_cast<std::size_t>(disc.mesh.num_nodes()), 0.0);
    const auto f = pointwise_error_field(disc, zero, p, 16);
    EXPECT_EQ(f.size(), 17u * 17u);
    for (const auto& s : f) EXPECT_NEAR(s.error, 1.0, 1e-15);
    std::ostringstream os;
    write_field_csv(os, f);
    EXPECT_EQ(os.str().rfind("x,y,abs_error\n", 0), 0u);
}

TEST(Reports, RatesFilledPerGroup)
{
    std::vector<RunRecord> recs;
    for (const char* s : {"SPP", "NPP"}) {
        for (int N : {20, 40, 80}) {
            RunRecord r;
            r.N = N;
            r.mesh = "rect";
            r.scheme = s;
            r.errors.l2 = 1.0 / (N * N);
            r.errors.h1 = 1.0 / N;
            r.errors.energy = 1.0 / N;
            recs.push_back(r);
        }
    }
    fill_rates(recs);
    EXPECT_FALSE(recs[0].rate_l2);
    EXPECT_NEAR(*recs[1].rate_l2, 2.0, 1e-12);
    EXPECT_NEAR(*recs[2].rate_h1, 1.0, 1e-12);
    EXPECT_FALSE(recs[3].rate_l2);
    std::ostringstream md;
    write_markdown_table(md, recs, NormKind::L2, "demo");
    EXPECT_NE(md.str().find("2.5000E-03"), std::string::npos);
    EXPECT_NE(md.str().find("2.0000"), std::string::npos);
    std::ostringstream csv;
    write_runs_csv(csv, recs);
    const std::string text = csv.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

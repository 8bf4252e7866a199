#include "ppife/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ppife;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("ppife_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Config, Validation)
{
    RunConfig c;
    EXPECT_NO_THROW(c.validate(true));
    c.beta_minus = -1.0;
    EXPECT_THROW(c.validate(false), ConfigError);
    c = RunConfig{};
    c.N = {20, 30, 60};
    EXPECT_THROW(c.validate(true), ConfigError);
    EXPECT_NO_THROW(c.validate(false));
    c.N = {1};
    EXPECT_THROW(c.validate(false), ConfigError);
    c = RunConfig{};
    c.schemes.clear();
    EXPECT_THROW(c.validate(false), ConfigError);
}

TEST(Config, InterfaceRadius)
{
    RunConfig c;
    EXPECT_NEAR(c.interface_radius(), benchmark_radius(), 1e-15);
    c.interface_spec = "circle(0,0,0.4)";
    EXPECT_NEAR(c.interface_radius(), 0.4, 1e-15);
    c.interface_spec = "circle(0.1,0,0.4)";
    EXPECT_THROW(c.interface_radius(), ConfigError);
}

TEST(Config, SigmaOverride)
{
    RunConfig c;
    c.sigma0 = 3.0;
    EXPECT_EQ(c.method(Scheme::SPP).sigma0, 3.0);
    EXPECT_EQ(c.method(Scheme::NPP).sigma0, 3.0);
    EXPECT_EQ(c.method(Scheme::Classic).sigma0, 0.0);
}

TEST(Harness, SingleRunMatchesReference)
{
    RunConfig c;
    const auto r = run_single(c, 20, Scheme::SPP);
    EXPECT_TRUE(r.record.converged);
    EXPECT_NEAR(r.record.errors.l2, 4.2899e-3, 1e-6);
    EXPECT_EQ(r.record.scheme, "spp");
    EXPECT_EQ(r.record.mesh, "rect");
}

TEST(Harness, ConvergenceIsDeterministic)
{
    RunConfig c;
    c.N = {8, 16, 32};
    c.schemes = {Scheme::Classic, Scheme::NPP};
    std::ostringstream log;
    c.out_dir = scratch("a").string();
    ASSERT_EQ(cmd_convergence(c, log), kExitOk);
    const auto first = slurp(std::filesystem::path(c.out_dir) / "convergence.csv");
    const auto md = slurp(std::filesystem::path(c.out_dir) / "convergence.md");
    c.out_dir = scratch("b").string();
    ASSERT_EQ(cmd_convergence(c, log), kExitOk);
    EXPECT_EQ(first, slurp(std::filesystem::path(c.out_dir) / "convergence.csv"));
    EXPECT_EQ(md, slurp(std::filesystem::path(c.out_dir) / "convergence.md"));
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.out_dir) / "convergence_timing.csv"));
}

TEST(Harness, ConvergenceNeedsThreeDoublingMeshes)
{
    RunConfig c;
    c.N = {8, 16};
    c.out_dir = scratch("c").string();
    std::ostringstream log;
    EXPECT_THROW(cmd_convergence(c, log), ConfigError);
}

TEST(Harness, SolveDumpsField)
{
    RunConfig c;
    c.N = {8};
    c.schemes = {Scheme::SPP};
    c.dump_field = true;
    c.out_dir = scratch("d").string();
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(c, log), kExitOk);
    const auto field = slurp(std::filesystem::path(c.out_dir) / "field_spp_N8.csv");
    EXPECT_EQ(std::count(field.begin(), field.end(), '\n'), 1 + 33 * 33);
}

// Command-line driver: solve, convergence and verify subcommands.

#include "ppife/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace ppife;

    CLI::App app{"Partially penalized immersed finite element solver"};
    app.set_config("--config", "", "INI/TOML file with keys named like the flags");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string mesh = "rect";
    std::vector<std::string> schemes;
    std::optional<double> sigma0;

    app.add_option("--N", cfg.N, "Cells per side (list for convergence; solve uses the first)")->expected(1, -1);
    app.add_option("--mesh", mesh, "Element kind")->check(CLI::IsMember({"tri", "rect"}));
    app.add_option("--scheme", schemes, "Schemes to run")
        ->check(CLI::IsMember({"classic", "spp", "ipp", "npp"}))
        ->expected(1, -1);
    auto* bm = app.add_option("--beta-minus", cfg.beta_minus, "Coefficient inside the interface");
    auto* bp = app.add_option("--beta-plus", cfg.beta_plus, "Coefficient outside the interface");
    app.add_option("--sigma0", sigma0, "Penalty parameter for all penalized schemes");
    app.add_option("--penalty-alpha", cfg.penalty_alpha, "Exponent of |B| in the penalty");
    app.add_option("--solver-tol", cfg.solver.tol_rel, "Relative residual tolerance");
    app.add_option("--seed", cfg.seed, "Seed for randomized scans and solver restarts");
    app.add_option("--out", cfg.out_dir, "Output directory");
    app.add_flag("--dump-field", cfg.dump_field, "Write |u - u_h| on a (4N+1)^2 grid");
    app.add_option("--interface", cfg.interface_spec, "circle(0,0,r); defaults to the benchmark circle");
    app.add_option("--samples", cfg.samples, "Random cuts per verify scan");

    auto* solve = app.add_subcommand("solve", "Single solve per scheme");
    auto* convergence = app.add_subcommand("convergence", "Convergence study over the N list");
    auto* verify = app.add_subcommand("verify", "Local estimate scans");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        cfg.mesh = parse_cell_kind(mesh);
        if (!schemes.empty()) {
            cfg.schemes.clear();
            for (const auto& s : schemes) {
                cfg.schemes.push_back(parse_scheme(s));
            }
        }
        cfg.sigma0 = sigma0;
        cfg.verify_use_config_beta = bm->count() > 0 || bp->count() > 0;
        if (*solve) {
            return cmd_solve(cfg, std::cout);
        }
        if (*convergence) {
            return cmd_convergence(cfg, std::cout);
        }
        if (*verify) {
            return cmd_verify(cfg, std::cout);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalFailure;
    }
    return kExitOk;
}

#include "ppife/harness.hpp"

#include "ppife/discretization.hpp"
#include "ppife/problem.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ppife {

namespace {

std::ofstream open_output(const RunConfig& config, const std::string& name)
{
    std::filesystem::create_directories(config.out_dir);
    const auto path = std::filesystem::path(config.out_dir) / name;
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

}  // namespace

void RunConfig::validate(bool need_doubling) const
{
    if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) {
        throw ConfigError("beta-minus and beta-plus must be positive");
    }
    if (schemes.empty()) {
        throw ConfigError("at least one scheme is required");
    }
    if (N.empty()) {
        throw ConfigError("at least one N is required");
    }
    for (std::size_t i = 0; i < N.size(); ++i) {
        if (N[i] < 2) {
            throw ConfigError("N must be at least 2");
        }
        if (need_doubling && i > 0 && N[i] != 2 * N[i - 1]) {
            throw ConfigError("N list must be strictly doubling");
        }
    }
    if (!(penalty_alpha > 0.0)) {
        throw ConfigError("penalty-alpha must be positive");
    }
    if (sigma0 && !(*sigma0 >= 0.0)) {
        throw ConfigError("sigma0 must be nonnegative");
    }
    if (!(solver.tol_rel > 0.0)) {
        throw ConfigError("solver-tol must be positive");
    }
    interface_radius();
}

InterfaceGeometry RunConfig::interface_geometry() const
{
    if (interface_spec.empty()) {
        return InterfaceGeometry::circle(0.0, 0.0, benchmark_radius());
    }
    return InterfaceGeometry::parse(interface_spec);
}

double RunConfig::interface_radius() const
{
    const InterfaceGeometry g = interface_geometry();
    // The manufactured solution needs a circle centred at the origin.
    const Vec2 grad0 = g.gradient({0.0, 0.0});
    const Vec2 grad1 = g.gradient({1.0, 0.0});
    if (norm(grad0) > 1e-14 || std::abs(grad1.x - 2.0) > 1e-12 || !(g({0.0, 0.0}) < 0.0)) {
        throw ConfigError("the exact solution is only available for circles centred at the origin");
    }
    return std::sqrt(-g({0.0, 0.0}));
}

MethodParams RunConfig::method(Scheme s) const
{
    MethodParams p = MethodParams::preset(s, beta_minus, beta_plus);
    if (sigma0 && s != Scheme::Classic) {
        p.sigma0 = *sigma0;
    }
    p.alpha = penalty_alpha;
    return p;
}

RunResult run_single(const RunConfig& config, int N, Scheme scheme)
{
    const auto t0 = std::chrono::steady_clock::now();
    DomainSpec dom = config.domain;
    dom.N = N;
    dom.cell_kind = config.mesh;
    dom.validate();
    const double r0 = config.interface_radius();
    const auto exact = ManufacturedSolution::circle_power(5.0, r0, config.beta_minus, config.beta_plus);
    const MethodParams params = config.method(scheme);

    RunResult out;
    out.disc = discretize(dom, config.interface_geometry(), config.beta_minus, config.beta_plus);
    SolverOptions opts = config.solver;
    opts.seed = config.seed;
    Solution sol = solve_problem(out.disc, params, exact, opts);
    for (double v : sol.coeffs) {
        if (!std::isfinite(v)) {
            throw NumericalFailure("non-finite solution at N=" + std::to_string(N) + ", scheme " + to_string(scheme));
        }
    }
    if (!(sol.stats.residual <= 1e-6)) {
        throw NumericalFailure("linear solve failed at N=" + std::to_string(N) + ", scheme " + to_string(scheme) +
                               " (relative residual " + std::to_string(sol.stats.residual) + ")");
    }

    RunRecord& r = out.record;
    r.N = N;
    r.h = out.disc.mesh.h;
    r.mesh = to_string(config.mesh);
    r.scheme = to_string(scheme);
    r.beta_minus = config.beta_minus;
    r.beta_plus = config.beta_plus;
    r.sigma0 = params.sigma0;
    r.alpha = params.alpha;
    r.errors = compute_errors(out.disc, params, sol.coeffs, exact);
    r.iterations = sol.stats.iterations;
    r.residual = sol.stats.residual;
    r.converged = sol.stats.converged;
    r.solver = sol.stats.solver;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.coeffs = std::move(sol.coeffs);
    return out;
}

int cmd_solve(const RunConfig& config, std::ostream& log)
{
    config.validate(false);
    const int N = config.N.front();
    std::vector<RunRecord> records;
    for (Scheme s : config.schemes) {
        RunResult res = run_single(config, N, s);
        const auto& r = res.record;
        log << r.scheme << " N=" << N << " L2=" << r.errors.l2 << " H1=" << r.errors.h1 << " Linf=" << r.errors.linf
            << " energy=" << r.errors.energy << " iterations=" << r.iterations << '\n';
        if (config.dump_field) {
            const auto exact = ManufacturedSolution::circle_power(5.0, config.interface_radius(), config.beta_minus,
                                                                  config.beta_plus);
            const auto field = pointwise_error_field(res.disc, res.coeffs, exact, 4 * N);
            auto out = open_output(config, "field_" + r.scheme + "_N" + std::to_string(N) + ".csv");
            write_field_csv(out, field);
        }
        records.push_back(r);
    }
    auto csv = open_output(config, "solve.csv");
    write_runs_csv(csv, records);
    auto timing = open_output(config, "solve_timing.csv");
    write_timing_csv(timing, records);
    return kExitOk;
}

int cmd_convergence(const RunConfig& config, std::ostream& log)
{
    config.validate(true);
    if (config.N.size() < 3) {
        throw ConfigError("a convergence study needs at least three N values");
    }
    std::vector<RunRecord> records;
    for (Scheme s : config.schemes) {
        for (int N : config.N) {
            records.push_back(run_single(config, N, s).record);
            const auto& r = records.back();
            log << r.scheme << " N=" << N << " L2=" << r.errors.l2 << " H1=" << r.errors.h1 << '\n';
        }
    }
    fill_rates(records);
    auto csv = open_output(config, "convergence.csv");
    write_runs_csv(csv, records);
    auto timing = open_output(config, "convergence_timing.csv");
    write_timing_csv(timing, records);
    auto md = open_output(config, "convergence.md");
    std::ostringstream title;
    title << " (" << to_string(config.mesh) << ", beta- = " << config.beta_minus << ", beta+ = " << config.beta_plus
          << ")";
    const std::string suffix = title.str();
    write_markdown_table(md, records, NormKind::H1, "|u_h - u|_H1" + suffix);
    write_markdown_table(md, records, NormKind::L2, "||u_h - u||_L2" + suffix);
    write_markdown_table(md, records, NormKind::Linf, "||u_h - u||_Linf" + suffix);
    write_markdown_table(md, records, NormKind::Energy, "||u_h - u||_h" + suffix);
    return kExitOk;
}

VerifyConfig verify_config(const RunConfig& config)
{
    VerifyConfig v;
    v.samples = config.samples;
    v.seed = config.seed;
    v.sigma0 = config.sigma0;
    if (config.verify_use_config_beta) {
        v.beta_pairs = {{config.beta_minus, config.beta_plus}};
        v.coercivity_betas = v.beta_pairs;
    }
    v.interp_beta_minus = config.beta_minus;
    v.interp_beta_plus = config.beta_plus;
    return v;
}

int cmd_verify(const RunConfig& config, std::ostream& log)
{
    config.validate(false);
    if (config.samples < 1) {
        throw ConfigError("samples must be positive");
    }
    const VerifyConfig v = verify_config(config);
    bool ok = true;
    for (auto scan : {scan_coefficient_bounds, scan_trace_ratio, scan_coercivity, interp_edge_error_study}) {
        const ScanReport rep = scan(v);
        auto out = open_output(config, "scan_" + rep.scan_id + ".csv");
        write_scan_csv(out, rep);
        log << rep.summary_line() << '\n';
        ok = ok && rep.pass;
    }
    return ok ? kExitOk : kExitVerificationFailure;
}

}  // namespace ppife

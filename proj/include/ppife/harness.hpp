#pragma once

#include "ppife/assembly.hpp"
#include "ppife/geometry.hpp"
#include "ppife/linsolve.hpp"
#include "ppife/postprocess.hpp"
#include "ppife/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ppife {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitNumericalFailure = 3,
    kExitVerificationFailure = 4,
};

struct RunConfig {
    DomainSpec domain;                          // N and cell kind are taken from the fields below
    CellKind mesh = CellKind::Rectangular;
    std::vector<int> N{20, 40, 80, 160, 320};  // solve uses the first entry
    std::string interface_spec;                 // empty means the benchmark circle
    double beta_minus = 1.0;
    double beta_plus = 10.0;
    std::vector<Scheme> schemes{Scheme::Classic, Scheme::SPP, Scheme::IPP, Scheme::NPP};
    std::optional<double> sigma0;  // overrides the preset penalty of every penalized scheme
    double penalty_alpha = 1.0;
    SolverOptions solver;
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    bool dump_field = false;
    int samples = 1000;  // verify scans
    bool verify_use_config_beta = false;  // scan only (beta_minus, beta_plus) instead of the default pairs

    /// Throws ConfigError: beta must be positive, schemes nonempty, N >= 2
    /// and (for more than one entry) strictly doubling.
    void validate(bool need_doubling) const;

    InterfaceGeometry interface_geometry() const;
    double interface_radius() const;
    MethodParams method(Scheme s) const;
};

/// Full pipeline for one mesh and scheme. Throws NumericalFailure when the
/// solve produces non-finite values or a relative residual above 1e-6.
struct RunResult {
    RunRecord record;
    Discretization disc;
    std::vector<double> coeffs;
};

RunResult run_single(const RunConfig& config, int N, Scheme scheme);

/// Runs each configured scheme on the first N; writes solve.csv, solve_timing.csv
/// and, with dump_field, field_<scheme>_N<N>.csv on a (4N+1)^2 grid.
int cmd_solve(const RunConfig& config, std::ostream& log);

/// Every scheme over the N list; writes convergence.csv, convergence_timing.csv
/// and convergence.md with one table per norm.
int cmd_convergence(const RunConfig& config, std::ostream& log);

/// Runs the four scans, writes scan_<id>.csv and prints one PASS/FAIL line each.
int cmd_verify(const RunConfig& config, std::ostream& log);

VerifyConfig verify_config(const RunConfig& config);

}  // namespace ppife

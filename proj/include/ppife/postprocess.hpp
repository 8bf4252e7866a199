#pragma once

#include "ppife/assembly.hpp"
#include "ppife/discretization.hpp"
#include "ppife/problem.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ppife {

// Error integrals use degree-6 rules on the chord pieces; `refine` extra
// levels of sub-triangle refinement are applied on interface elements only.
// By default the exact solution piece (and coefficient) is picked by the true
// level-set sign at each point. ExactPiece::Chord extends each exact piece up
// to the chord instead (comparison only).
enum class ExactPiece { LevelSet, Chord };

double l2_error(const Discretization& disc, std::span<const double> coeffs, const ManufacturedSolution& exact,
                int refine = 1, ExactPiece piece = ExactPiece::LevelSet);
double h1_semi_error(const Discretization& disc, std::span<const double> coeffs, const ManufacturedSolution& exact,
                     int refine = 1, ExactPiece piece = ExactPiece::LevelSet);

/// Max over a uniform 5x5 sample per element (its barycentric subset on
/// triangles), which includes all element vertices.
double linf_error(const Discretization& disc, std::span<const double> coeffs, const ManufacturedSolution& exact);

/// sqrt(sum_K ||sqrt(beta) grad(u - u_h)||^2 + sum_B sigma0_B/|B|^alpha ||[u_h]||^2).
double energy_error(const Discretization& disc, const MethodParams& params, std::span<const double> coeffs,
                    const ManufacturedSolution& exact, int refine = 1, ExactPiece piece = ExactPiece::LevelSet);

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double linf = 0.0;
    double energy = 0.0;
};

ErrorNorms compute_errors(const Discretization& disc, const MethodParams& params, std::span<const double> coeffs,
                          const ManufacturedSolution& exact, int refine = 1, ExactPiece piece = ExactPiece::LevelSet);

/// Nodal values of the exact solution (piece chosen by the level-set sign at each node).
std::vector<double> nodal_interpolant(const Discretization& disc, const ManufacturedSolution& exact);

/// rate_k = log(e_k / e_{k+1}) / log(N_{k+1} / N_k); one entry per consecutive pair.
std::vector<double> convergence_rates(std::span<const std::pair<int, double>> errors);

/// Element containing p (ties resolved towards the lower index).
int locate_element(const CartesianMesh& mesh, const Point& p);

struct FieldSample {
    double x = 0.0;
    double y = 0.0;
    double error = 0.0;
};

/// |u - u_h| on a uniform (samples_per_side + 1)^2 grid over the domain.
std::vector<FieldSample> pointwise_error_field(const Discretization& disc, std::span<const double> coeffs,
                                               const ManufacturedSolution& exact, int samples_per_side);

void write_field_csv(std::ostream& out, std::span<const FieldSample> field);

struct RunRecord {
    int N = 0;
    double h = 0.0;
    std::string mesh;
    std::string scheme;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    double sigma0 = 0.0;
    double alpha = 1.0;
    ErrorNorms errors;
    std::optional<double> rate_l2;
    std::optional<double> rate_h1;
    std::optional<double> rate_energy;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::string solver;
    double wall_time = 0.0;  // written only to the timing CSV
};

/// Fills the rate fields of consecutive records that share mesh, scheme and beta pair.
void fill_rates(std::vector<RunRecord>& records);

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records);
void write_timing_csv(std::ostream& out, std::span<const RunRecord> records);

enum class NormKind { L2, H1, Linf, Energy };

std::string to_string(NormKind k);

/// One row per N, an (error, rate) column pair per scheme.
void write_markdown_table(std::ostream& out, std::span<const RunRecord> records, NormKind norm,
                          const std::string& title);

}  // namespace ppife

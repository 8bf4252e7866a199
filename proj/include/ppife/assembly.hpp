#pragma once

#include "ppife/discretization.hpp"
#include "ppife/linsolve.hpp"
#include "ppife/problem.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppife {

enum class Scheme { Classic, SPP, IPP, NPP, Custom };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Edge-term parameters of
///   a(u,v) = sum_K (beta grad u, grad v)_K
///          + delta   sum_B ({beta grad u . n_B}, [v])_B
///          + epsilon sum_B ({beta grad v . n_B}, [u])_B
///          + sum_B sigma0_B / |B|^alpha ([u], [v])_B
/// with B ranging over interior interface edges.
struct MethodParams {
    Scheme scheme = Scheme::Classic;
    double delta = 0.0;
    double epsilon = 0.0;
    double sigma0 = 0.0;                    // value of the default constant rule
    std::function<double(int)> sigma0_rule;  // per-edge override; empty means constant sigma0
    double alpha = 1.0;

    double sigma0_at(int edge) const { return sigma0_rule ? sigma0_rule(edge) : sigma0; }
    bool symmetric() const { return delta == epsilon; }

    /// Classic (0,0,0); SPP (-1,-1,10 max beta); IPP (-1,0,10 max beta); NPP (-1,1,1).
    static MethodParams preset(Scheme scheme, double beta_minus, double beta_plus);
};

/// Local stiffness matrix of element e (rows and columns follow local vertex order).
Eigen::MatrixXd element_stiffness(const Discretization& disc, int e, int degree = 4);

struct EdgeMatrix {
    std::vector<int> dofs;  // global node ids
    Eigen::MatrixXd M;      // rows: test functions, columns: trial functions
};

struct EdgeTerms {
    bool consistency = true;
    bool symmetrization = true;
    bool penalty = true;
};

EdgeMatrix edge_matrix(const Discretization& disc, const MethodParams& params, int edge, int degree = 4,
                       EdgeTerms terms = {});

std::vector<Triplet> assemble_volume(const Discretization& disc, int degree = 4);
std::vector<Triplet> assemble_edges(const Discretization& disc, const MethodParams& params, int degree = 4,
                                    EdgeTerms terms = {});

/// b_i = sum_K (f, phi_i)_K. The source piece is chosen by the exact level
/// set at each quadrature point; interface elements use the chord split with
/// one level of sub-triangle refinement at degree 6.
std::vector<double> assemble_load(const Discretization& disc,
                                  const std::function<double(const Point&, Side)>& f);

struct SparseSystem {
    CsrMatrix A;  // all nodes
    std::vector<double> b;
    std::vector<int> dirichlet_nodes;
    std::vector<double> dirichlet_values;
    std::vector<int> free_dofs;
};

struct ReducedSystem {
    CsrMatrix A;  // free-dof block
    std::vector<double> rhs;
    std::vector<int> free_dofs;
    std::vector<double> full_template;  // boundary values filled, free entries zero

    std::vector<double> expand(std::span<const double> x_free) const;
};

SparseSystem assemble_system(const Discretization& disc, const MethodParams& params,
                             const ManufacturedSolution& problem);

/// Full matrix only (no load): volume plus edge terms.
CsrMatrix assemble_matrix(const Discretization& disc, const MethodParams& params);

/// Fixes boundary dofs to the nodal values of g and moves their columns to the right-hand side.
ReducedSystem apply_dirichlet(const SparseSystem& system);

/// Dirichlet data by nodal interpolation of the exact solution.
void set_dirichlet(SparseSystem& system, const Discretization& disc, const ManufacturedSolution& problem);

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::string solver;
};

struct Solution {
    std::vector<double> coeffs;  // nodal values on all nodes
    SolveStats stats;
};

/// Assembles, applies boundary data and solves: CG for symmetric schemes,
/// BiCGSTAB otherwise.
Solution solve_problem(const Discretization& disc, const MethodParams& params, const ManufacturedSolution& problem,
                       const SolverOptions& options = {});

/// sqrt(v^T (A_vol + A_pen) v) from assembled blocks.
double energy_norm_matrix(const Discretization& disc, const MethodParams& params, std::span<const double> v);

}  // namespace ppife

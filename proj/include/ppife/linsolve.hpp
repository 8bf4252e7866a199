#pragma once

#include "ppife/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ppife {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
class CsrMatrix {
public:
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col_idx;
    std::vector<double> values;

    /// Sorts by (row, col), sums duplicates and drops exact zeros.
    static CsrMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets);

    std::size_t nnz() const { return values.size(); }
    double at(int i, int j) const;
    std::vector<double> diagonal() const;
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    CsrMatrix transpose() const;
    double max_abs() const;

    /// max |A_ij - A_ji| over stored entries.
    double asymmetry() const;
};

/// MatrixMarket coordinate (real general) format.
void write_matrix_market(std::ostream& out, const CsrMatrix& A);

enum class Preconditioner { None, Jacobi };

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0;  // ||b - A x|| / ||b||, recomputed from x
    bool converged = false;
    int restarts = 0;
};

struct SolverOptions {
    double tol_rel = 1e-12;
    int max_iter = 0;  // 0 means 20 * n
    Preconditioner precond = Preconditioner::Jacobi;
    std::uint64_t seed = 12345;
};

/// Preconditioned conjugate gradients. Throws AsymmetricInput when a random
/// sample of 100 stored entries is not symmetric to 1e-12 relative.
SolveResult cg(const CsrMatrix& A, std::span<const double> b, const SolverOptions& opts = {});

/// Right-preconditioned BiCGSTAB with up to three restarts on breakdown.
SolveResult bicgstab(const CsrMatrix& A, std::span<const double> b, const SolverOptions& opts = {});

/// Dense LU fallback for small systems (n <= 2000).
std::vector<double> dense_solve(const CsrMatrix& A, std::span<const double> b);

/// Sparse LU with one step of iterative refinement. Used when an iterative
/// solve stalls; residual is reported like the iterative solvers.
SolveResult sparse_lu_solve(const CsrMatrix& A, std::span<const double> b);

double norm2(std::span<const double> v);

}  // namespace ppife

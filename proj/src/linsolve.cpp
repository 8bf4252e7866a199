#include "ppife/linsolve.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>

namespace ppife {

CsrMatrix CsrMatrix::from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets)
{
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix A;
    A.n_rows = n_rows;
    A.n_cols = n_cols;
    A.row_ptr.assign(static_cast<std::size_t>(n_rows) + 1, 0);
    A.col_idx.reserve(triplets.size());
    A.values.reserve(triplets.size());

    std::size_t k = 0;
    for (int i = 0; i < n_rows; ++i) {
        while (k < triplets.size() && triplets[k].row == i) {
            const int j = triplets[k].col;
            double sum = 0.0;
            while (k < triplets.size() && triplets[k].row == i && triplets[k].col == j) {
                sum += triplets[k].value;
                ++k;
            }
            if (sum != 0.0) {
                A.col_idx.push_back(j);
                A.values.push_back(sum);
            }
        }
        A.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(A.values.size());
    }
    if (k != triplets.size()) {
        throw Error("triplet row index out of range");
    }
    return A;
}

double CsrMatrix::at(int i, int j) const
{
    const auto begin = col_idx.begin() + row_ptr[static_cast<std::size_t>(i)];
    const auto end = col_idx.begin() + row_ptr[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) {
        return 0.0;
    }
    return values[static_cast<std::size_t>(it - col_idx.begin())];
}

std::vector<double> CsrMatrix::diagonal() const
{
    std::vector<double> d(static_cast<std::size_t>(n_rows), 0.0);
    for (int i = 0; i < n_rows; ++i) {
        d[static_cast<std::size_t>(i)] = at(i, i);
    }
    return d;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (int i = 0; i < n_rows; ++i) {
        double s = 0.0;
        for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            s += values[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_idx[static_cast<std::size_t>(k)])];
        }
        y[static_cast<std::size_t>(i)] = s;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(static_cast<std::size_t>(n_rows));
    multiply(x, y);
    return y;
}

CsrMatrix CsrMatrix::transpose() const
{
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (int i = 0; i < n_rows; ++i) {
        for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            t.push_back({col_idx[static_cast<std::size_t>(k)], i, values[static_cast<std::size_t>(k)]});
        }
    }
    return from_triplets(n_cols, n_rows, std::move(t));
}

double CsrMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double CsrMatrix::asymmetry() const
{
    double m = 0.0;
    for (int i = 0; i < n_rows; ++i) {
        for (int k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            const int j = col_idx[static_cast<std::size_t>(k)];
            m = std::max(m, std::abs(values[static_cast<std::size_t>(k)] - at(j, i)));
        }
    }
    return m;
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.n_rows << ' ' << A.n_cols << ' ' << A.nnz() << '\n';
    out.precision(17);
    for (int i = 0; i < A.n_rows; ++i) {
        for (int k = A.row_ptr[static_cast<std::size_t>(i)]; k < A.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            out << i + 1 << ' ' << A.col_idx[static_cast<std::size_t>(k)] + 1 << ' '
                << A.values[static_cast<std::size_t>(k)] << '\n';
        }
    }
}

double norm2(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

namespace {

double dotp(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

std::vector<double> inverse_diagonal(const CsrMatrix& A, Preconditioner p)
{
    std::vector<double> inv(static_cast<std::size_t>(A.n_rows), 1.0);
    if (p == Preconditioner::Jacobi) {
        const auto d = A.diagonal();
        for (std::size_t i = 0; i < d.size(); ++i) {
            inv[i] = d[i] != 0.0 ? 1.0 / d[i] : 1.0;
        }
    }
    return inv;
}

double true_residual(const CsrMatrix& A, std::span<const double> b, std::span<const double> x,
                     std::vector<double>& r)
{
    A.multiply(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = b[i] - r[i];
    }
    return norm2(r);
}

void check_square(const CsrMatrix& A, std::span<const double> b)
{
    if (A.n_rows != A.n_cols || static_cast<std::size_t>(A.n_rows) != b.size()) {
        throw Error("solver needs a square matrix matching the right-hand side");
    }
}

constexpr int kMaxResidualReplacements = 5;

}  // namespace

SolveResult cg(const CsrMatrix& A, std::span<const double> b, const SolverOptions& opts)
{
    check_square(A, b);
    const auto n = static_cast<std::size_t>(A.n_rows);
    if (A.nnz() > 0) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_int_distribution<std::size_t> pick(0, A.nnz() - 1);
        const double scale = A.max_abs();
        for (int s = 0; s < 100; ++s) {
            const std::size_t k = pick(rng);
            const int i = static_cast<int>(std::upper_bound(A.row_ptr.begin(), A.row_ptr.end(), static_cast<int>(k)) -
                                           A.row_ptr.begin()) - 1;
            const int j = A.col_idx[k];
            if (std::abs(A.values[k] - A.at(j, i)) > 1e-12 * scale) {
                throw AsymmetricInput("cg: matrix is not symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
        }
    }

    SolveResult res;
    res.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(20 * n);
    const auto inv_diag = inverse_diagonal(A, opts.precond);

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n), p(n), Ap(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = inv_diag[i] * r[i];
    }
    p = z;
    double rz = dotp(r, z);
    double rnorm = bnorm;
    int replacements = 0;

    while (res.iterations < max_iter) {
        A.multiply(p, Ap);
        const double pAp = dotp(p, Ap);
        if (pAp == 0.0) {
            break;
        }
        const double alpha = rz / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            res.x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        ++res.iterations;
        rnorm = norm2(r);
        if (rnorm <= opts.tol_rel * bnorm) {
            rnorm = true_residual(A, b, res.x, r);
            if (rnorm <= opts.tol_rel * bnorm || ++replacements > kMaxResidualReplacements) {
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
        }
        const double rz_new = dotp(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    res.residual = true_residual(A, b, res.x, r) / bnorm;
    res.converged = res.residual <= opts.tol_rel;
    return res;
}

SolveResult bicgstab(const CsrMatrix& A, std::span<const double> b, const SolverOptions& opts)
{
    check_square(A, b);
    const auto n = static_cast<std::size_t>(A.n_rows);
    SolveResult res;
    res.x.assign(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(20 * n);
    const auto inv_diag = inverse_diagonal(A, opts.precond);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> r_hat = r;
    std::vector<double> p(n, 0.0), v(n, 0.0), p_hat(n), s(n), s_hat(n), t(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    int replacements = 0;
    const double tiny = std::numeric_limits<double>::min() * 1e10;

    std::vector<double> x_good(n, 0.0);
    double best = bnorm;
    auto restart = [&] {
        // Resume from the best iterate so far with its true residual.
        res.x = x_good;
        true_residual(A, b, res.x, r);
        const double rn = norm2(r);
        for (std::size_t i = 0; i < n; ++i) {
            r_hat[i] = r[i] + 1e-3 * rn / std::sqrt(static_cast<double>(n)) * gauss(rng);
        }
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        rho = alpha = omega = 1.0;
        ++res.restarts;
    };

    bool done = false;
    while (!done && res.iterations < max_iter) {
        const double rho_new = dotp(r_hat, r);
        if (!std::isfinite(rho_new) || std::abs(rho_new) < tiny * bnorm) {
            if (res.restarts >= 3) {
                break;
            }
            restart();
            continue;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            p_hat[i] = inv_diag[i] * p[i];
        }
        A.multiply(p_hat, v);
        const double rv = dotp(r_hat, v);
        if (rv == 0.0 || !std::isfinite(rv)) {
            if (res.restarts >= 3) {
                break;
            }
            restart();
            continue;
        }
        alpha = rho / rv;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = r[i] - alpha * v[i];
        }
        ++res.iterations;
        if (norm2(s) <= opts.tol_rel * bnorm) {
            for (std::size_t i = 0; i < n; ++i) {
                res.x[i] += alpha * p_hat[i];
            }
            const double tr = true_residual(A, b, res.x, r);
            if (tr <= opts.tol_rel * bnorm || ++replacements > kMaxResidualReplacements) {
                break;
            }
            restart();
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            s_hat[i] = inv_diag[i] * s[i];
        }
        A.multiply(s_hat, t);
        const double tt = dotp(t, t);
        omega = tt > 0.0 ? dotp(t, s) / tt : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            res.x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        if (norm2(r) <= opts.tol_rel * bnorm) {
            const double tr = true_residual(A, b, res.x, r);
            if (tr <= opts.tol_rel * bnorm || ++replacements > kMaxResidualReplacements) {
                done = true;
                break;
            }
            restart();
            continue;
        }
        const double rn = norm2(r);
        if (!std::isfinite(rn) || rn > 1e6 * bnorm) {
            if (res.restarts >= 3) {
                res.x = x_good;
                break;
            }
            restart();
            continue;
        }
        if (rn < best) {
            best = rn;
            x_good = res.x;
        }
        if (std::abs(omega) < 1e-300) {
            if (res.restarts >= 3) {
                break;
            }
            restart();
        }
    }
    std::vector<double> tmp(n);
    res.residual = true_residual(A, b, res.x, tmp) / bnorm;
    if (!(res.residual <= opts.tol_rel)) {
        const double rg = true_residual(A, b, x_good, tmp) / bnorm;
        if (rg < res.residual || !std::isfinite(res.residual)) {
            res.x = x_good;
            res.residual = rg;
        }
    }
    res.converged = res.residual <= opts.tol_rel;
    return res;
}

std::vector<double> dense_solve(const CsrMatrix& A, std::span<const double> b)
{
    check_square(A, b);
    if (A.n_rows > 2000) {
        throw Error("dense_solve is limited to n <= 2000");
    }
    const int n = A.n_rows;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = A.row_ptr[static_cast<std::size_t>(i)]; k < A.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            M(i, A.col_idx[static_cast<std::size_t>(k)]) = A.values[static_cast<std::size_t>(k)];
        }
    }
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = b[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd x = M.partialPivLu().solve(rhs);
    return {x.data(), x.data() + n};
}

SolveResult sparse_lu_solve(const CsrMatrix& A, std::span<const double> b)
{
    check_square(A, b);
    const auto n = static_cast<std::size_t>(A.n_rows);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(A.nnz());
    for (int i = 0; i < A.n_rows; ++i) {
        for (int k = A.row_ptr[static_cast<std::size_t>(i)]; k < A.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
            t.emplace_back(i, A.col_idx[static_cast<std::size_t>(k)], A.values[static_cast<std::size_t>(k)]);
        }
    }
    Eigen::SparseMatrix<double> M(A.n_rows, A.n_cols);
    M.setFromTriplets(t.begin(), t.end());
    M.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) {
        throw NumericalFailure("sparse LU factorization failed: " + lu.lastErrorMessage());
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd x = lu.solve(rhs);
    const Eigen::VectorXd r = rhs - M * x;
    x += lu.solve(r);

    SolveResult res;
    res.x.assign(x.data(), x.data() + x.size());
    std::vector<double> tmp(n);
    const double bnorm = norm2(b);
    res.residual = bnorm > 0.0 ? true_residual(A, b, res.x, tmp) / bnorm : 0.0;
    res.converged = true;
    return res;
}

}  // namespace ppife

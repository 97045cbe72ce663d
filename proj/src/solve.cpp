#include "tpfem/solve.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <vector>

namespace tpfem {

namespace {

constexpr double direct_tolerance = 1e-10;

double safe_norm(const Vector& b)
{
    const double n = b.norm();
    return n > 0.0 ? n : 1.0;
}

template <typename MatVec>
SolveReport conjugate_gradient(MatVec&& matvec, const Vector& diag, Index n, const Vector& b,
                               std::span<const Index> constrained, const CgOptions& options)
{
    if (b.size() != n) {
        throw std::invalid_argument("solve_cg: rhs length does not match the operator");
    }
    Vector free_mask = Vector::Ones(n);
    Vector x = Vector::Zero(n);
    for (Index d : constrained) {
        if (d < 0 || d >= n) {
            throw std::out_of_range("solve_cg: constrained dof out of range");
        }
        free_mask[d] = 0.0;
        x[d] = b[d];
    }

    // lifted rhs: same vector apply_dirichlet would produce
    Vector lifted = b - matvec(x);
    lifted = lifted.cwiseProduct(free_mask);
    for (Index d : constrained) {
        lifted[d] = b[d];
    }
    const double bnorm = safe_norm(lifted);

    Vector inv_diag = Vector::Ones(n);
    if (options.jacobi) {
        for (Index i = 0; i < n; ++i) {
            if (free_mask[i] != 0.0) {
                if (!(diag[i] > 0.0)) {
                    throw SolverError("solve_cg: non-positive diagonal entry, operator is not SPD");
                }
                inv_diag[i] = 1.0 / diag[i];
            }
        }
    }

    const auto project = [&free_mask](const Vector& v) -> Vector { return v.cwiseProduct(free_mask); };

    SolveReport report;
    report.method = SolveMethod::iterative;
    Vector dx = Vector::Zero(n);
    Vector r = project(lifted);
    double rel = r.norm() / bnorm;
    int it = 0;
    // the recurrence residual drifts from the true one near tight tolerances;
    // restart from the true residual until it meets the tolerance
    for (int restart = 0; rel > options.tol; ++restart) {
        if (restart > 5) {
            throw SolverError("solve_cg: true residual " + std::to_string(rel) + " stalled above the tolerance");
        }
        Vector z = inv_diag.cwiseProduct(r);
        Vector p = z;
        double rz = r.dot(z);
        while (rel > 0.5 * options.tol) {
            if (it >= options.max_iterations) {
                throw SolverError("solve_cg: no convergence after " + std::to_string(options.max_iterations) +
                                  " iterations (relative residual " + std::to_string(rel) + ")");
            }
            const Vector ap = project(matvec(p));
            const double pap = p.dot(ap);
            if (!(pap > 0.0)) {
                throw SolverError("solve_cg: operator lost positive definiteness (p^T A p = " +
                                  std::to_string(pap) + ")");
            }
            const double alpha = rz / pap;
            dx += alpha * p;
            r -= alpha * ap;
            z = inv_diag.cwiseProduct(r);
            const double rz_next = r.dot(z);
            p = z + (rz_next / rz) * p;
            rz = rz_next;
            ++it;
            rel = r.norm() / bnorm;
        }
        r = project(lifted - matvec(dx));
        rel = r.norm() / bnorm;
    }

    report.solution = x + dx;
    report.iterations = it;
    report.residual_norm = rel;
    return report;
}

}  // namespace

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b)
{
    return (a * x - b).norm() / safe_norm(b);
}

SolveReport solve_direct(const SparseMatrix& a, const Vector& b)
{
    if (a.rows() != a.cols() || a.rows() != b.size()) {
        throw std::invalid_argument("solve_direct: dimension mismatch");
    }
    SparseMatrix m = a;
    m.makeCompressed();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<SparseMatrix::StorageIndex>> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success) {
        throw SolverError("solve_direct: factorization failed (" + lu.lastErrorMessage() + ")");
    }

    SolveReport report;
    report.method = SolveMethod::direct;
    report.solution = lu.solve(b);
    if (lu.info() != Eigen::Success || !report.solution.allFinite()) {
        throw SolverError("solve_direct: matrix is singular");
    }
    report.residual_norm = relative_residual(m, report.solution, b);
    for (int step = 0; step < 2 && report.residual_norm > direct_tolerance; ++step) {
        report.solution += lu.solve(b - m * report.solution);
        report.residual_norm = relative_residual(m, report.solution, b);
    }
    if (!(report.residual_norm <= direct_tolerance)) {
        throw SolverError("solve_direct: relative residual " + std::to_string(report.residual_norm) +
                          " above 1e-10; matrix is singular or badly conditioned");
    }
    return report;
}

SolveReport solve_cg(const KronSumOperator& op, const Vector& b, std::span<const Index> constrained,
                     const CgOptions& options)
{
    return conjugate_gradient([&op](const Vector& v) { return apply(op, v); }, op.diagonal(), op.size(), b,
                              constrained, options);
}

SolveReport solve_cg(const SparseMatrix& a, const Vector& b, std::span<const Index> constrained,
                     const CgOptions& options)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("solve_cg: matrix must be square");
    }
    return conjugate_gradient([&a](const Vector& v) -> Vector { return a * v; }, Vector(a.diagonal()), a.rows(), b,
                              constrained, options);
}

}  // namespace tpfem

#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "tpfem/linalg.hpp"
#include "tpfem/tensor.hpp"

namespace tpfem {

/// Raised for singular systems, non-convergence or loss of definiteness.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SolveMethod { direct, iterative };

struct SolveReport {
    Vector solution;
    SolveMethod method = SolveMethod::direct;
    int iterations = 0;
    double residual_norm = 0.0;  // ||A x - b||_2 / ||b||_2
};

/// Relative residual ||A x - b|| / ||b||, or ||A x|| when b is zero.
double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b);

/// Sparse LU. Requires a relative residual of at most 1e-10 after up to two
/// refinement steps.
SolveReport solve_direct(const SparseMatrix& a, const Vector& b);

struct CgOptions {
    double tol = 1e-10;
    int max_iterations = 10000;
    bool jacobi = true;
};

/// Conjugate gradients on the free-dof subspace. For every dof in
/// `constrained` the solution takes the value b[dof]; the remaining rows
/// solve (A x)[free] = b[free]. The reported residual is that of the system
/// produced by apply_dirichlet with the same values.
SolveReport solve_cg(const KronSumOperator& op, const Vector& b, std::span<const Index> constrained,
                     const CgOptions& options = {});
SolveReport solve_cg(const SparseMatrix& a, const Vector& b, std::span<const Index> constrained,
                     const CgOptions& options = {});

}  // namespace tpfem

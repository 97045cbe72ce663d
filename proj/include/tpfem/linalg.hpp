#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tpfem {

/// Rows index test functions, columns index trial functions.
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

}  // namespace tpfem

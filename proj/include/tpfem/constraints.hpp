#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "tpfem/linalg.hpp"
#include "tpfem/tensor.hpp"

namespace tpfem {

/// Scalar field on product coordinates.
using ScalarField = std::function<double(std::span<const double>)>;

/// Which faces of the product boundary carry Dirichlet data. With
/// exclude_omega2_end the face at the last Omega_2 node (t = T for
/// space-time problems) is left free.
struct FaceSelection {
    bool constrain_omega1_boundary = true;
    bool constrain_omega2_boundary = true;
    bool exclude_omega2_end = false;
};

struct DirichletData {
    ScalarField evaluator;

    static DirichletData homogeneous()
    {
        return {[](std::span<const double>) { return 0.0; }};
    }
};

std::vector<Index> constrained_dofs(const ProductSpace& space, const FaceSelection& sel);

/// Nodal interpolation of the data at the listed dofs. Throws if a value is
/// not finite.
Vector boundary_values(const ProductSpace& space, std::span<const Index> dofs, const DirichletData& data);

struct ConstrainedSystem {
    SparseMatrix matrix;
    Vector rhs;
};

/// Symmetric elimination with lifting. `values` has full length and only its
/// entries at `dofs` are read.
ConstrainedSystem apply_dirichlet(const SparseMatrix& a, const Vector& rhs, std::span<const Index> dofs,
                                  const Vector& values);

ConstrainedSystem apply_dirichlet(const SparseMatrix& a, const Vector& rhs, std::span<const Index> dofs,
                                  const DirichletData& data, const ProductSpace& space);

}  // namespace tpfem

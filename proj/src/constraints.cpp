#include "tpfem/constraints.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpfem {

std::vector<Index> constrained_dofs(const ProductSpace& space, const FaceSelection& sel)
{
    const Mesh& m1 = space.mesh1();
    const Mesh& m2 = space.mesh2();
    const Index last = space.n2() - 1;

    std::vector<Index> dofs;
    for (Index i = 0; i < space.n1(); ++i) {
        const bool on1 = sel.constrain_omega1_boundary && m1.is_boundary(i);
        for (Index j = 0; j < space.n2(); ++j) {
            const bool on2 = sel.constrain_omega2_boundary && m2.is_boundary(j) &&
                             !(sel.exclude_omega2_end && j == last);
            if (on1 || on2) {
                dofs.push_back(space.index(i, j));
            }
        }
    }
    return dofs;
}

Vector boundary_values(const ProductSpace& space, std::span<const Index> dofs, const DirichletData& data)
{
    Vector g = Vector::Zero(space.num_dofs());
    for (Index d : dofs) {
        const ProductPoint p = space.point(d);
        const double v = data.evaluator(p.coords());
        if (!std::isfinite(v)) {
            throw std::domain_error("apply_dirichlet: boundary data is not finite at dof " + std::to_string(d));
        }
        g[d] = v;
    }
    return g;
}

ConstrainedSystem apply_dirichlet(const SparseMatrix& a, const Vector& rhs, std::span<const Index> dofs,
                                  const Vector& values)
{
    const Index n = a.rows();
    if (a.cols() != n || rhs.size() != n || values.size() != n) {
        throw std::invalid_argument("apply_dirichlet: matrix, rhs and boundary values must have matching size");
    }
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    Vector g = Vector::Zero(n);
    for (Index d : dofs) {
        if (d < 0 || d >= n) {
            throw std::out_of_range("apply_dirichlet: dof " + std::to_string(d) + " out of range");
        }
        fixed[static_cast<std::size_t>(d)] = 1;
        g[d] = values[d];
    }

    ConstrainedSystem out{a, rhs - a * g};
    for (Index d : dofs) {
        out.rhs[d] = g[d];
    }

    SparseMatrix& m = out.matrix;
    for (Index col = 0; col < m.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
            if (fixed[static_cast<std::size_t>(it.row())] || fixed[static_cast<std::size_t>(col)]) {
                it.valueRef() = it.row() == col ? 1.0 : 0.0;
            }
        }
    }
    m.prune([](Index, Index, double v) { return v != 0.0; });
    for (Index d : dofs) {
        m.coeffRef(d, d) = 1.0;
    }
    m.makeCompressed();
    return out;
}

ConstrainedSystem apply_dirichlet(const SparseMatrix& a, const Vector& rhs, std::span<const Index> dofs,
                                  const DirichletData& data, const ProductSpace& space)
{
    if (space.num_dofs() != a.rows()) {
        throw std::invalid_argument("apply_dirichlet: matrix size does not match the product space");
    }
    return apply_dirichlet(a, rhs, dofs, boundary_values(space, dofs, data));
}

}  // namespace tpfem

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "tpfem/assembly.hpp"
#include "tpfem/constraints.hpp"
#include "tpfem/solve.hpp"

namespace tpfem {
namespace {

ProductSpace three_by_three()
{
    return ProductSpace(interval_mesh(2), interval_mesh(2));
}

TEST(ConstrainedDofs, FullBoundary)
{
    const auto dofs = constrained_dofs(three_by_three(), {});
    EXPECT_EQ(dofs, (std::vector<Index>{0, 1, 2, 3, 5, 6, 7, 8}));
}

TEST(ConstrainedDofs, FreeFinalFace)
{
    const auto dofs = constrained_dofs(three_by_three(), {true, true, true});
    EXPECT_EQ(dofs, (std::vector<Index>{0, 1, 2, 3, 6, 7, 8}));
}

TEST(ConstrainedDofs, OmegaOneBoundaryOnly)
{
    const auto dofs = constrained_dofs(three_by_three(), {true, false, false});
    EXPECT_EQ(dofs, (std::vector<Index>{0, 1, 2, 6, 7, 8}));
}

TEST(ConstrainedDofs, FourDimensionalCount)
{
    const ProductSpace s(unit_square_mesh(3, 3), unit_square_mesh(3, 3));
    const auto dofs = constrained_dofs(s, {});
    // 16*16 nodes, 4*4 interior
    EXPECT_EQ(static_cast<Index>(dofs.size()), 256 - 16);
    EXPECT_TRUE(std::is_sorted(dofs.begin(), dofs.end()));
}

TEST(ApplyDirichlet, TwoByTwoElimination)
{
    DenseMatrix a(2, 2);
    a << 2, -1, -1, 2;
    const std::vector<Index> dofs{0};
    Vector g(2);
    g << 1.0, 0.0;
    const ConstrainedSystem sys = apply_dirichlet(a.sparseView(), Vector::Zero(2), dofs, g);
    DenseMatrix expected(2, 2);
    expected << 1, 0, 0, 2;
    EXPECT_EQ(oracle::max_abs(DenseMatrix(sys.matrix) - expected), 0.0);
    EXPECT_DOUBLE_EQ(sys.rhs[0], 1.0);
    EXPECT_DOUBLE_EQ(sys.rhs[1], 1.0);
    const Vector x = solve_direct(sys.matrix, sys.rhs).solution;
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 0.5, 1e-15);
    // the unconstrained equation of the original system holds
    EXPECT_NEAR((a * x)[1], 0.0, 1e-15);
    // and the reaction at the constrained dof is what the original row gives
    EXPECT_NEAR((a * x)[0], 1.5, 1e-15);
}

TEST(ApplyDirichlet, HomogeneousDataLeavesFreeRhs)
{
    const ProductSpace s = three_by_three();
    std::mt19937 rng(1);
    const Mesh m = interval_mesh(2);
    const SparseMatrix k = kron(assemble_matrix(m, FormKind::stiffness()), assemble_matrix(m, FormKind::mass()));
    const Vector b = oracle::random_vector(9, rng);
    const auto dofs = constrained_dofs(s, {});
    const ConstrainedSystem sys = apply_dirichlet(k, b, dofs, DirichletData::homogeneous(), s);
    EXPECT_DOUBLE_EQ(sys.rhs[4], b[4]);
    for (Index d : dofs) {
        EXPECT_EQ(sys.rhs[d], 0.0);
    }
}

class DirichletProperties : public ::testing::Test {
protected:
    void SetUp() override
    {
        const Mesh m = interval_mesh(5);
        const Mesh t = interval_mesh(4);
        a = kron(assemble_matrix(m, FormKind::stiffness()), assemble_matrix(t, FormKind::mass())) +
            kron(assemble_matrix(m, FormKind::mass()), assemble_matrix(t, FormKind::stiffness()));
        std::mt19937 rng(21);
        b = oracle::random_vector(a.rows(), rng);
        g = oracle::random_vector(a.rows(), rng);
        dofs = constrained_dofs(space, {});
    }

    ProductSpace space{interval_mesh(5), interval_mesh(4)};
    SparseMatrix a;
    Vector b;
    Vector g;
    std::vector<Index> dofs;
};

TEST_F(DirichletProperties, SymmetryPreserved)
{
    const ConstrainedSystem sys = apply_dirichlet(a, b, dofs, g);
    const DenseMatrix m(sys.matrix);
    EXPECT_EQ(oracle::max_abs(m - m.transpose()), 0.0);
}

TEST_F(DirichletProperties, Idempotent)
{
    const ConstrainedSystem once = apply_dirichlet(a, b, dofs, g);
    const ConstrainedSystem twice = apply_dirichlet(once.matrix, once.rhs, dofs, g);
    EXPECT_EQ(oracle::max_abs(DenseMatrix(once.matrix) - DenseMatrix(twice.matrix)), 0.0);
    EXPECT_LE((once.rhs - twice.rhs).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_F(DirichletProperties, SolutionSatisfiesOriginalFreeRows)
{
    const ConstrainedSystem sys = apply_dirichlet(a, b, dofs, g);
    const Vector x = solve_direct(sys.matrix, sys.rhs).solution;
    const Vector r = a * x - b;
    std::vector<char> fixed(static_cast<std::size_t>(a.rows()), 0);
    for (Index d : dofs) {
        fixed[static_cast<std::size_t>(d)] = 1;
        EXPECT_NEAR(x[d], g[d], 1e-14);
    }
    for (Index i = 0; i < a.rows(); ++i) {
        if (!fixed[static_cast<std::size_t>(i)]) {
            EXPECT_NEAR(r[i], 0.0, 1e-12);
        }
    }
}

TEST_F(DirichletProperties, RejectsNonFiniteData)
{
    DirichletData bad{[](std::span<const double> x) {
        return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    }};
    EXPECT_THROW(apply_dirichlet(a, b, dofs, bad, space), std::domain_error);
    const std::vector<Index> outside{a.rows()};
    EXPECT_THROW(apply_dirichlet(a, b, outside, g), std::out_of_range);
}

TEST(ApplyDirichlet, LinearPatchIsReproducedExactly)
{
    // P1 contains linear functions, so a linear u with zero forcing is exact
    const ProductSpace s(unit_square_mesh(3, 2), interval_mesh(4));
    const auto lin = [](std::span<const double> x) { return 1.0 + 2.0 * x[0] - 0.5 * x[1] + 0.75 * x[2]; };
    const SparseMatrix a =
        kron(assemble_matrix(s.mesh1(), FormKind::stiffness()), assemble_matrix(s.mesh2(), FormKind::mass())) +
        kron(assemble_matrix(s.mesh1(), FormKind::mass()), assemble_matrix(s.mesh2(), FormKind::stiffness()));
    const auto dofs = constrained_dofs(s, {});
    const ConstrainedSystem sys = apply_dirichlet(a, Vector::Zero(s.num_dofs()), dofs, DirichletData{lin}, s);
    const Vector x = solve_direct(sys.matrix, sys.rhs).solution;
    double err = 0.0;
    for (Index g = 0; g < s.num_dofs(); ++g) {
        err = std::max(err, std::abs(x[g] - lin(s.point(g).coords())));
    }
    EXPECT_LE(err, 1e-12);
}

}  // namespace
}  // namespace tpfem

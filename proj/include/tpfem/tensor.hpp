#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "tpfem/linalg.hpp"
#include "tpfem/mesh.hpp"

namespace tpfem {

/// Product coordinate (x1, x2) with x1 in Omega_1 and x2 in Omega_2. At most
/// four components are used.
struct ProductPoint {
    std::array<double, 4> x{};
    int dim = 0;

    [[nodiscard]] std::span<const double> coords() const { return {x.data(), static_cast<std::size_t>(dim)}; }
    double operator[](int d) const { return x[static_cast<std::size_t>(d)]; }
};

/// Omega = Omega_1 x Omega_2 with the Omega_1-major dof numbering
/// g = i * n2 + j.
class ProductSpace {
public:
    ProductSpace(Mesh mesh1, Mesh mesh2);

    [[nodiscard]] const Mesh& mesh1() const noexcept { return mesh1_; }
    [[nodiscard]] const Mesh& mesh2() const noexcept { return mesh2_; }
    [[nodiscard]] Index n1() const noexcept { return n1_; }
    [[nodiscard]] Index n2() const noexcept { return n2_; }
    [[nodiscard]] Index num_dofs() const noexcept { return n1_ * n2_; }
    [[nodiscard]] int dim() const noexcept { return mesh1_.dim() + mesh2_.dim(); }

    [[nodiscard]] Index index(Index i, Index j) const;
    [[nodiscard]] std::pair<Index, Index> split(Index g) const;
    [[nodiscard]] ProductPoint point(Index g) const;

private:
    Mesh mesh1_;
    Mesh mesh2_;
    Index n1_;
    Index n2_;
};

Index product_index(Index i, Index j, const ProductSpace& space);
std::pair<Index, Index> product_index_inverse(Index g, const ProductSpace& space);

/// (A kron B)[i * rows(B) + k, j * cols(B) + l] = A[i, j] * B[k, l]
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);
Vector kron(const Vector& a, const Vector& b);

/// sum_t coefficient_t * (A_t kron B_t) with every A_t n1 x n1 and every
/// B_t n2 x n2.
class KronSumOperator {
public:
    struct Term {
        double coefficient;
        SparseMatrix a;
        SparseMatrix b;
    };

    KronSumOperator() = default;
    explicit KronSumOperator(std::vector<Term> terms);

    KronSumOperator& add(double coefficient, SparseMatrix a, SparseMatrix b);

    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
    [[nodiscard]] Index n1() const noexcept { return n1_; }
    [[nodiscard]] Index n2() const noexcept { return n2_; }
    [[nodiscard]] Index size() const noexcept { return n1_ * n2_; }

    /// Diagonal of the sum without materializing it.
    [[nodiscard]] Vector diagonal() const;

private:
    std::vector<Term> terms_;
    Index n1_ = 0;
    Index n2_ = 0;
};

SparseMatrix materialize(const KronSumOperator& op);

/// Matrix-free product using (A kron B) x = vec(A X B^T) with X the
/// row-major n1 x n2 reshape of x.
Vector apply(const KronSumOperator& op, const Vector& x);

}  // namespace tpfem

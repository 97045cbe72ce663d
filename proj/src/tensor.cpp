#include "tpfem/tensor.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace tpfem {

namespace {

using RowMajorDense = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using StorageIndex = SparseMatrix::StorageIndex;

StorageIndex checked_product(Index a, Index b, const char* what)
{
    if (a != 0 && b > std::numeric_limits<StorageIndex>::max() / a) {
        throw std::overflow_error(std::string("kron: ") + what + " overflows the sparse index type");
    }
    return static_cast<StorageIndex>(a * b);
}

}  // namespace

ProductSpace::ProductSpace(Mesh mesh1, Mesh mesh2)
    : mesh1_(std::move(mesh1)), mesh2_(std::move(mesh2)), n1_(mesh1_.num_nodes()), n2_(mesh2_.num_nodes())
{
}

Index ProductSpace::index(Index i, Index j) const
{
    if (i < 0 || i >= n1_ || j < 0 || j >= n2_) {
        throw std::out_of_range("ProductSpace: node pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") out of range");
    }
    return i * n2_ + j;
}

std::pair<Index, Index> ProductSpace::split(Index g) const
{
    if (g < 0 || g >= num_dofs()) {
        throw std::out_of_range("ProductSpace: dof " + std::to_string(g) + " out of range");
    }
    return {g / n2_, g % n2_};
}

ProductPoint ProductSpace::point(Index g) const
{
    const auto [i, j] = split(g);
    ProductPoint p;
    int d = 0;
    for (double v : mesh1_.node(i)) {
        p.x[static_cast<std::size_t>(d++)] = v;
    }
    for (double v : mesh2_.node(j)) {
        p.x[static_cast<std::size_t>(d++)] = v;
    }
    p.dim = d;
    return p;
}

Index product_index(Index i, Index j, const ProductSpace& space)
{
    return space.index(i, j);
}

std::pair<Index, Index> product_index_inverse(Index g, const ProductSpace& space)
{
    return space.split(g);
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b)
{
    const StorageIndex rows = checked_product(a.rows(), b.rows(), "row count");
    const StorageIndex cols = checked_product(a.cols(), b.cols(), "column count");
    checked_product(a.nonZeros(), b.nonZeros(), "nonzero count");

    SparseMatrix result(rows, cols);
    Eigen::Matrix<StorageIndex, Eigen::Dynamic, 1> per_column(cols);
    for (Index j = 0; j < a.cols(); ++j) {
        const Index nnz_a = a.outerIndexPtr()[j + 1] - a.outerIndexPtr()[j];
        for (Index l = 0; l < b.cols(); ++l) {
            const Index nnz_b = b.outerIndexPtr()[l + 1] - b.outerIndexPtr()[l];
            per_column[j * b.cols() + l] = static_cast<StorageIndex>(nnz_a * nnz_b);
        }
    }
    result.reserve(per_column);

    // columns are visited in order and rows ascend within each column
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index l = 0; l < b.cols(); ++l) {
            const Index col = j * b.cols() + l;
            for (SparseMatrix::InnerIterator ia(a, j); ia; ++ia) {
                for (SparseMatrix::InnerIterator ib(b, l); ib; ++ib) {
                    result.insert(ia.row() * b.rows() + ib.row(), col) = ia.value() * ib.value();
                }
            }
        }
    }
    result.makeCompressed();
    return result;
}

Vector kron(const Vector& a, const Vector& b)
{
    Vector r(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) {
        r.segment(i * b.size(), b.size()) = a[i] * b;
    }
    return r;
}

KronSumOperator::KronSumOperator(std::vector<Term> terms)
{
    for (auto& t : terms) {
        add(t.coefficient, std::move(t.a), std::move(t.b));
    }
}

KronSumOperator& KronSumOperator::add(double coefficient, SparseMatrix a, SparseMatrix b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw std::invalid_argument("KronSumOperator: factors must be square");
    }
    if (terms_.empty()) {
        n1_ = a.rows();
        n2_ = b.rows();
    } else if (a.rows() != n1_ || b.rows() != n2_) {
        throw std::invalid_argument("KronSumOperator: term of size " + std::to_string(a.rows()) + " x " +
                                    std::to_string(b.rows()) + " does not match " + std::to_string(n1_) + " x " +
                                    std::to_string(n2_));
    }
    terms_.push_back({coefficient, std::move(a), std::move(b)});
    return *this;
}

Vector KronSumOperator::diagonal() const
{
    Vector d = Vector::Zero(size());
    for (const auto& t : terms_) {
        const Vector da = t.a.diagonal();
        const Vector db = t.b.diagonal();
        d += t.coefficient * kron(da, db);
    }
    return d;
}

SparseMatrix materialize(const KronSumOperator& op)
{
    SparseMatrix result(op.size(), op.size());
    for (const auto& t : op.terms()) {
        result += t.coefficient * kron(t.a, t.b);
    }
    result.makeCompressed();
    return result;
}

Vector apply(const KronSumOperator& op, const Vector& x)
{
    if (x.size() != op.size()) {
        throw std::invalid_argument("apply: vector of length " + std::to_string(x.size()) + " for operator of size " +
                                    std::to_string(op.size()));
    }
    const Eigen::Map<const RowMajorDense> xm(x.data(), op.n1(), op.n2());
    RowMajorDense ym = RowMajorDense::Zero(op.n1(), op.n2());
    for (const auto& t : op.terms()) {
        const RowMajorDense xbt = xm * t.b.transpose();
        ym.noalias() += t.coefficient * (t.a * xbt);
    }
    return Eigen::Map<const Vector>(ym.data(), ym.size());
}

}  // namespace tpfem

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tpfem {

using Index = std::ptrdiff_t;

enum class Diagonal { right, left, crossed };

/// Simplicial mesh of a low-dimensional subdomain: intervals (dim 1) or
/// triangles (dim 2). Immutable once built.
class Mesh {
public:
    Mesh(int dim, std::vector<double> coords, std::vector<Index> cells,
         std::vector<Index> boundary_nodes);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int nodes_per_cell() const noexcept { return dim_ + 1; }
    [[nodiscard]] Index num_nodes() const noexcept;
    [[nodiscard]] Index num_cells() const noexcept;

    [[nodiscard]] std::span<const double> node(Index i) const;
    [[nodiscard]] std::span<const Index> cell(Index c) const;

    /// Sorted node indices on the geometric boundary.
    [[nodiscard]] const std::vector<Index>& boundary_nodes() const noexcept { return boundary_; }
    [[nodiscard]] bool is_boundary(Index i) const;

    /// Maximum edge length over all cells.
    [[nodiscard]] double h() const noexcept { return h_; }

    /// Cell length (dim 1) or area (dim 2).
    [[nodiscard]] double cell_volume(Index c) const;

private:
    int dim_;
    std::vector<double> coords_;
    std::vector<Index> cells_;
    std::vector<Index> boundary_;
    std::vector<char> on_boundary_;
    double h_ = 0.0;
};

/// Uniform partition of (a, b) into n_cells intervals.
Mesh interval_mesh(int n_cells, double a = 0.0, double b = 1.0);

/// Structured triangulation of the unit square. Grid nodes are numbered
/// row-major in (y, x); the crossed pattern appends one center node per
/// square after the grid nodes.
Mesh unit_square_mesh(int nx, int ny, Diagonal diagonal = Diagonal::right);

std::vector<Index> boundary_nodes(const Mesh& mesh);

/// Boundary nodes recovered from connectivity alone: nodes on facets that
/// belong to exactly one cell.
std::vector<Index> boundary_nodes_from_topology(const Mesh& mesh);

}  // namespace tpfem

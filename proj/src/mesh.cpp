#include "tpfem/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace tpfem {

namespace {

double distance(std::span<const double> p, std::span<const double> q)
{
    double s = 0.0;
    for (std::size_t d = 0; d < p.size(); ++d) {
        s += (p[d] - q[d]) * (p[d] - q[d]);
    }
    return std::sqrt(s);
}

}  // namespace

Mesh::Mesh(int dim, std::vector<double> coords, std::vector<Index> cells,
           std::vector<Index> boundary_nodes)
    : dim_(dim), coords_(std::move(coords)), cells_(std::move(cells)), boundary_(std::move(boundary_nodes))
{
    if (dim_ != 1 && dim_ != 2) {
        throw std::invalid_argument("Mesh: dim must be 1 or 2, got " + std::to_string(dim_));
    }
    if (coords_.size() % static_cast<std::size_t>(dim_) != 0 ||
        cells_.size() % static_cast<std::size_t>(dim_ + 1) != 0) {
        throw std::invalid_argument("Mesh: coordinate or connectivity array has the wrong stride");
    }
    const Index n = num_nodes();
    for (Index v : cells_) {
        if (v < 0 || v >= n) {
            throw std::invalid_argument("Mesh: cell references node " + std::to_string(v) + " out of range");
        }
    }
    std::sort(boundary_.begin(), boundary_.end());
    boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
    on_boundary_.assign(static_cast<std::size_t>(n), 0);
    for (Index v : boundary_) {
        if (v < 0 || v >= n) {
            throw std::invalid_argument("Mesh: boundary node out of range");
        }
        on_boundary_[static_cast<std::size_t>(v)] = 1;
    }

    for (Index c = 0; c < num_cells(); ++c) {
        const auto vs = cell(c);
        for (std::size_t a = 0; a < vs.size(); ++a) {
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                h_ = std::max(h_, distance(node(vs[a]), node(vs[b])));
            }
        }
    }
}

Index Mesh::num_nodes() const noexcept
{
    return static_cast<Index>(coords_.size()) / dim_;
}

Index Mesh::num_cells() const noexcept
{
    return static_cast<Index>(cells_.size()) / (dim_ + 1);
}

std::span<const double> Mesh::node(Index i) const
{
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
}

std::span<const Index> Mesh::cell(Index c) const
{
    return {cells_.data() + c * (dim_ + 1), static_cast<std::size_t>(dim_ + 1)};
}

bool Mesh::is_boundary(Index i) const
{
    return on_boundary_.at(static_cast<std::size_t>(i)) != 0;
}

double Mesh::cell_volume(Index c) const
{
    const auto vs = cell(c);
    if (dim_ == 1) {
        return std::abs(node(vs[1])[0] - node(vs[0])[0]);
    }
    const auto p0 = node(vs[0]);
    const auto p1 = node(vs[1]);
    const auto p2 = node(vs[2]);
    return 0.5 * std::abs((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

Mesh interval_mesh(int n_cells, double a, double b)
{
    if (n_cells < 1) {
        throw std::invalid_argument("interval_mesh: n_cells must be >= 1");
    }
    if (!(a < b)) {
        throw std::invalid_argument("interval_mesh: requires a < b");
    }
    std::vector<double> x(static_cast<std::size_t>(n_cells) + 1);
    for (int i = 0; i <= n_cells; ++i) {
        x[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / n_cells;
    }
    x.back() = b;
    std::vector<Index> cells;
    cells.reserve(2 * static_cast<std::size_t>(n_cells));
    for (Index i = 0; i < n_cells; ++i) {
        cells.push_back(i);
        cells.push_back(i + 1);
    }
    return Mesh(1, std::move(x), std::move(cells), {0, n_cells});
}

Mesh unit_square_mesh(int nx, int ny, Diagonal diagonal)
{
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("unit_square_mesh: nx and ny must be >= 1");
    }
    const Index stride = nx + 1;
    const auto grid = [stride](Index i, Index j) { return j * stride + i; };

    std::vector<double> coords;
    std::vector<Index> boundary;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            coords.push_back(static_cast<double>(i) / nx);
            coords.push_back(static_cast<double>(j) / ny);
            if (i == 0 || i == nx || j == 0 || j == ny) {
                boundary.push_back(grid(i, j));
            }
        }
    }

    std::vector<Index> cells;
    Index next_center = (nx + 1) * static_cast<Index>(ny + 1);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Index v00 = grid(i, j);
            const Index v10 = grid(i + 1, j);
            const Index v11 = grid(i + 1, j + 1);
            const Index v01 = grid(i, j + 1);
            switch (diagonal) {
            case Diagonal::right:
                cells.insert(cells.end(), {v00, v10, v11, v00, v11, v01});
                break;
            case Diagonal::left:
                cells.insert(cells.end(), {v00, v10, v01, v10, v11, v01});
                break;
            case Diagonal::crossed: {
                coords.push_back((i + 0.5) / nx);
                coords.push_back((j + 0.5) / ny);
                const Index m = next_center++;
                cells.insert(cells.end(), {v00, v10, m, v10, v11, m, v11, v01, m, v01, v00, m});
                break;
            }
            }
        }
    }
    return Mesh(2, std::move(coords), std::move(cells), std::move(boundary));
}

std::vector<Index> boundary_nodes(const Mesh& mesh)
{
    return mesh.boundary_nodes();
}

std::vector<Index> boundary_nodes_from_topology(const Mesh& mesh)
{
    std::vector<Index> result;
    if (mesh.dim() == 1) {
        std::map<Index, int> count;
        for (Index c = 0; c < mesh.num_cells(); ++c) {
            for (Index v : mesh.cell(c)) {
                ++count[v];
            }
        }
        for (const auto& [v, k] : count) {
            if (k == 1) {
                result.push_back(v);
            }
        }
        return result;
    }

    std::map<std::pair<Index, Index>, int> edges;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        for (int a = 0; a < 3; ++a) {
            const Index p = vs[static_cast<std::size_t>(a)];
            const Index q = vs[static_cast<std::size_t>((a + 1) % 3)];
            ++edges[std::minmax(p, q)];
        }
    }
    for (const auto& [e, k] : edges) {
        if (k == 1) {
            result.push_back(e.first);
            result.push_back(e.second);
        }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

}  // namespace tpfem

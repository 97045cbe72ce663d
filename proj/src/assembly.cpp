#include "tpfem/assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tpfem {

namespace {

constexpr int max_nodes = 3;
constexpr int max_qp = 3;

/// P1 data on one cell: quadrature weights (scaled by the cell volume),
/// basis values at the quadrature points and the constant basis gradients.
struct CellValues {
    int n_nodes = 0;
    int n_qp = 0;
    double volume = 0.0;
    std::array<double, max_qp> weight{};
    std::array<std::array<double, max_nodes>, max_qp> value{};
    std::array<std::array<double, 2>, max_nodes> grad{};
};

CellValues cell_values(const Mesh& mesh, Index c)
{
    CellValues cv;
    const auto vs = mesh.cell(c);
    cv.volume = mesh.cell_volume(c);
    if (mesh.dim() == 1) {
        // two-point Gauss on the unit interval
        const double jac = mesh.node(vs[1])[0] - mesh.node(vs[0])[0];
        const double offset = 0.5 / std::sqrt(3.0);
        const std::array<double, 2> xi{0.5 - offset, 0.5 + offset};
        cv.n_nodes = 2;
        cv.n_qp = 2;
        for (int q = 0; q < 2; ++q) {
            cv.weight[q] = 0.5 * cv.volume;
            cv.value[q] = {1.0 - xi[q], xi[q], 0.0};
        }
        cv.grad[0] = {-1.0 / jac, 0.0};
        cv.grad[1] = {1.0 / jac, 0.0};
        return cv;
    }

    // degree-2 exact three-point rule at the interior points
    const auto p0 = mesh.node(vs[0]);
    const auto p1 = mesh.node(vs[1]);
    const auto p2 = mesh.node(vs[2]);
    const double j00 = p1[0] - p0[0];
    const double j01 = p2[0] - p0[0];
    const double j10 = p1[1] - p0[1];
    const double j11 = p2[1] - p0[1];
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0) {
        throw std::invalid_argument("assembly: degenerate triangle " + std::to_string(c));
    }
    // rows of J^{-T} applied to the reference gradients (1,0) and (0,1)
    cv.grad[1] = {j11 / det, -j01 / det};
    cv.grad[2] = {-j10 / det, j00 / det};
    cv.grad[0] = {-cv.grad[1][0] - cv.grad[2][0], -cv.grad[1][1] - cv.grad[2][1]};

    const std::array<std::array<double, 2>, 3> pts{{{1.0 / 6, 1.0 / 6}, {2.0 / 3, 1.0 / 6}, {1.0 / 6, 2.0 / 3}}};
    cv.n_nodes = 3;
    cv.n_qp = 3;
    for (int q = 0; q < 3; ++q) {
        cv.weight[q] = cv.volume / 3.0;
        cv.value[q] = {1.0 - pts[q][0] - pts[q][1], pts[q][0], pts[q][1]};
    }
    return cv;
}

double directional(const std::vector<double>& b, const std::array<double, 2>& g)
{
    double s = 0.0;
    for (std::size_t d = 0; d < b.size(); ++d) {
        s += b[d] * g[d];
    }
    return s;
}

void check_velocity(const Mesh& mesh, const std::vector<double>& b, const char* what)
{
    if (static_cast<int>(b.size()) != mesh.dim()) {
        throw std::invalid_argument(std::string(what) + ": velocity has dimension " + std::to_string(b.size()) +
                                    " but the mesh has dimension " + std::to_string(mesh.dim()));
    }
}

bool needs_velocity(FormKind::Tag tag)
{
    switch (tag) {
    case FormKind::Tag::advection:
    case FormKind::Tag::advection_transpose:
    case FormKind::Tag::supg_advection:
    case FormKind::Tag::laplacian_advection:
        return true;
    default:
        return false;
    }
}

/// Integrates a local form over every cell. `local(cv, q, k, i)` returns the
/// integrand for test k and trial i at quadrature point q.
template <typename Integrand>
SparseMatrix integrate(const Mesh& mesh, Integrand&& local)
{
    const Index n = mesh.num_nodes();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(mesh.num_cells()) * max_nodes * max_nodes);
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        const CellValues cv = cell_values(mesh, c);
        for (int k = 0; k < cv.n_nodes; ++k) {
            for (int i = 0; i < cv.n_nodes; ++i) {
                double s = 0.0;
                for (int q = 0; q < cv.n_qp; ++q) {
                    s += cv.weight[q] * local(cv, q, k, i);
                }
                entries.emplace_back(vs[static_cast<std::size_t>(k)], vs[static_cast<std::size_t>(i)], s);
            }
        }
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    return m;
}

SparseMatrix endpoint_flux(const Mesh& mesh)
{
    // n = -1 at the left end, +1 at the right end
    const Index n = mesh.num_nodes();
    std::vector<Triplet> entries;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        const CellValues cv = cell_values(mesh, c);
        for (int k = 0; k < 2; ++k) {
            const Index node = vs[static_cast<std::size_t>(k)];
            if (!mesh.is_boundary(node)) {
                continue;
            }
            const Index other = vs[static_cast<std::size_t>(1 - k)];
            const double normal = mesh.node(node)[0] < mesh.node(other)[0] ? -1.0 : 1.0;
            for (int j = 0; j < 2; ++j) {
                entries.emplace_back(node, vs[static_cast<std::size_t>(j)], normal * cv.grad[j][0]);
            }
        }
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

}  // namespace

SparseMatrix assemble_matrix(const Mesh& mesh, const FormKind& kind)
{
    using Tag = FormKind::Tag;
    if (needs_velocity(kind.tag)) {
        check_velocity(mesh, kind.velocity, "assemble_matrix");
    }
    const auto& b = kind.velocity;

    switch (kind.tag) {
    case Tag::mass:
        return integrate(mesh, [](const CellValues& cv, int q, int k, int i) {
            return cv.value[q][i] * cv.value[q][k];
        });
    case Tag::stiffness:
        return integrate(mesh, [](const CellValues& cv, int, int k, int i) {
            return cv.grad[i][0] * cv.grad[k][0] + cv.grad[i][1] * cv.grad[k][1];
        });
    case Tag::advection:
        return integrate(mesh, [&b](const CellValues& cv, int q, int k, int i) {
            return directional(b, cv.grad[i]) * cv.value[q][k];
        });
    case Tag::advection_transpose:
        return integrate(mesh, [&b](const CellValues& cv, int q, int k, int i) {
            return cv.value[q][i] * directional(b, cv.grad[k]);
        });
    case Tag::supg_advection:
        return integrate(mesh, [&b](const CellValues& cv, int, int k, int i) {
            return directional(b, cv.grad[i]) * directional(b, cv.grad[k]);
        });
    case Tag::laplacian_advection:
    case Tag::laplacian_mass:
        // second derivatives of P1 vanish cellwise
        return SparseMatrix(mesh.num_nodes(), mesh.num_nodes());
    case Tag::temporal_stiffness_with_boundary: {
        if (mesh.dim() != 1) {
            throw std::invalid_argument("assemble_matrix: temporal_stiffness_with_boundary requires a 1D mesh");
        }
        SparseMatrix m = assemble_matrix(mesh, FormKind::stiffness()) - endpoint_flux(mesh);
        m.makeCompressed();
        return m;
    }
    }
    throw std::invalid_argument("assemble_matrix: unknown form kind");
}

Vector assemble_vector(const Mesh& mesh, const VectorFormKind& kind)
{
    if (kind.tag == VectorFormKind::Tag::supg_load) {
        check_velocity(mesh, kind.velocity, "assemble_vector");
    }
    Vector f = Vector::Zero(mesh.num_nodes());
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto vs = mesh.cell(c);
        const CellValues cv = cell_values(mesh, c);
        for (int k = 0; k < cv.n_nodes; ++k) {
            double s = 0.0;
            for (int q = 0; q < cv.n_qp; ++q) {
                s += cv.weight[q] * (kind.tag == VectorFormKind::Tag::load ? cv.value[q][k]
                                                                           : directional(kind.velocity, cv.grad[k]));
            }
            f[vs[static_cast<std::size_t>(k)]] += s;
        }
    }
    return f;
}

SubdomainForms assemble_forms(const Mesh& mesh, const std::vector<double>& velocity)
{
    SubdomainForms forms;
    forms.mass = assemble_matrix(mesh, FormKind::mass());
    forms.stiffness = assemble_matrix(mesh, FormKind::stiffness());
    forms.advection = assemble_matrix(mesh, FormKind::advection(velocity));
    forms.advection_transpose = assemble_matrix(mesh, FormKind::advection_transpose(velocity));
    forms.supg_advection = assemble_matrix(mesh, FormKind::supg_advection(velocity));
    forms.laplacian_advection = assemble_matrix(mesh, FormKind::laplacian_advection(velocity));
    forms.laplacian_mass = assemble_matrix(mesh, FormKind::laplacian_mass());
    forms.load = assemble_vector(mesh, VectorFormKind::load());
    forms.supg_load = assemble_vector(mesh, VectorFormKind::supg_load(velocity));
    return forms;
}

}  // namespace tpfem

#include "tpfem/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tpfem/assembly.hpp"

namespace tpfem {

namespace {

Vector nodal_values(const ProductSpace& space, const ScalarField& f)
{
    Vector v = Vector::Zero(space.num_dofs());
    if (!f) {
        return v;
    }
    for (Index g = 0; g < space.num_dofs(); ++g) {
        v[g] = f(space.point(g).coords());
    }
    return v;
}

/// (A kron B) applied to x without forming the product.
Vector kron_apply(const SparseMatrix& a, const SparseMatrix& b, const Vector& x)
{
    KronSumOperator op;
    op.add(1.0, a, b);
    return apply(op, x);
}

ProductSystem with_dirichlet(KronSumOperator op, Vector rhs, const ProblemSpec& spec, const FaceSelection& sel)
{
    ProductSystem sys{std::move(op), std::move(rhs), constrained_dofs(spec.space, sel), {}};
    sys.boundary_values = boundary_values(spec.space, sys.constrained, spec.dirichlet);
    return sys;
}

std::pair<std::vector<double>, std::vector<double>> split_velocity(const ProblemSpec& spec)
{
    const auto d1 = static_cast<std::size_t>(spec.space.mesh1().dim());
    const auto d2 = static_cast<std::size_t>(spec.space.mesh2().dim());
    if (spec.velocity.size() != d1 + d2) {
        throw std::invalid_argument("assemble_advdiff_supg: velocity must have " + std::to_string(d1 + d2) +
                                    " components, got " + std::to_string(spec.velocity.size()));
    }
    return {{spec.velocity.begin(), spec.velocity.begin() + static_cast<std::ptrdiff_t>(d1)},
            {spec.velocity.begin() + static_cast<std::ptrdiff_t>(d1), spec.velocity.end()}};
}

ProductSystem build_advdiff_aligned(const ProblemSpec& spec, const std::vector<double>& b1,
                                    const std::vector<double>& b2)
{
    for (double v : b1) {
        if (v != 0.0) {
            throw std::invalid_argument(
                "assemble_advdiff_supg: aligned assembly requires the velocity to vanish on Omega_1");
        }
    }
    const Mesh& m1 = spec.space.mesh1();
    const Mesh& m2 = spec.space.mesh2();
    const double kappa = spec.kappa;
    const double tau = spec.tau;

    const SparseMatrix k11 = assemble_matrix(m1, FormKind::stiffness());
    const SparseMatrix k12 = assemble_matrix(m1, FormKind::mass());
    const SparseMatrix k13 = assemble_matrix(m1, FormKind::laplacian_mass());
    const SubdomainForms f2 = assemble_forms(m2, b2);
    const SparseMatrix& k21 = f2.stiffness;
    const SparseMatrix& k22 = f2.mass;
    const SparseMatrix& k23 = f2.advection;
    const SparseMatrix& k24 = f2.advection_transpose;
    const SparseMatrix& k25 = f2.laplacian_advection;
    const SparseMatrix& k26 = f2.supg_advection;

    KronSumOperator op;
    op.add(kappa, k11, k22)
        .add(kappa, k12, k21)
        .add(1.0, k12, k23)
        .add(-kappa * tau, k13, k24)
        .add(-kappa * tau, k12, k25)
        .add(tau, k12, k26);

    const Vector f = nodal_values(spec.space, spec.forcing);
    Vector rhs;
    if (spec.rhs_mode == RhsMode::paper_fdof) {
        const Vector f1 = assemble_vector(m1, VectorFormKind::load());
        rhs = f.cwiseProduct(kron(f1, f2.load)) - tau * f.cwiseProduct(kron(f1, f2.supg_load));
    } else {
        // residual form: the SUPG load enters as +tau (f, b . grad v)
        rhs = kron_apply(k12, k22, f) + tau * kron_apply(k12, k24, f);
    }
    return with_dirichlet(std::move(op), std::move(rhs), spec, FaceSelection{});
}

ProductSystem build_advdiff_general(const ProblemSpec& spec, const std::vector<double>& b1,
                                    const std::vector<double>& b2)
{
    const double kappa = spec.kappa;
    const double tau = spec.tau;
    const SubdomainForms s1 = assemble_forms(spec.space.mesh1(), b1);
    const SubdomainForms s2 = assemble_forms(spec.space.mesh2(), b2);

    const SparseMatrix& k11 = s1.stiffness;
    const SparseMatrix& k12 = s1.mass;
    const SparseMatrix& k13 = s1.advection;
    const SparseMatrix& k14 = s1.laplacian_advection;
    const SparseMatrix& k15 = s1.laplacian_mass;
    const SparseMatrix& k16 = s1.advection_transpose;
    const SparseMatrix& k17 = s1.supg_advection;
    const SparseMatrix& k21 = s2.stiffness;
    const SparseMatrix& k22 = s2.mass;
    const SparseMatrix& k23 = s2.advection;
    const SparseMatrix& k24 = s2.laplacian_advection;
    const SparseMatrix& k25 = s2.laplacian_mass;
    const SparseMatrix& k26 = s2.advection_transpose;
    const SparseMatrix& k27 = s2.supg_advection;

    KronSumOperator op;
    op.add(kappa, k11, k22)
        .add(kappa, k12, k21)
        .add(1.0, k13, k22)
        .add(1.0, k12, k23)
        .add(-kappa * tau, k14, k22)
        .add(-kappa * tau, k15, k26)
        .add(-kappa * tau, k16, k25)
        .add(-kappa * tau, k12, k24)
        .add(tau, k17, k22)
        .add(tau, k13, k26)
        .add(tau, k16, k23)
        .add(tau, k12, k27);

    const Vector f = nodal_values(spec.space, spec.forcing);
    Vector rhs;
    if (spec.rhs_mode == RhsMode::paper_fdof) {
        const Vector& f1 = s1.load;
        const Vector& f2 = s2.load;
        const Vector& f3 = s2.supg_load;
        const Vector& f4 = s1.supg_load;
        rhs = f.cwiseProduct(kron(f1, f2)) - tau * f.cwiseProduct(kron(f4, f2) + kron(f1, f3));
    } else {
        rhs = kron_apply(k12, k22, f) + tau * (kron_apply(k16, k22, f) + kron_apply(k12, k26, f));
    }
    return with_dirichlet(std::move(op), std::move(rhs), spec, FaceSelection{});
}

}  // namespace

ProductSystem build_poisson(const ProblemSpec& spec)
{
    if (spec.kind != ProblemKind::poisson) {
        throw std::invalid_argument("assemble_poisson_product: problem kind is not poisson");
    }
    const Mesh& m1 = spec.space.mesh1();
    const Mesh& m2 = spec.space.mesh2();
    const SparseMatrix k11 = assemble_matrix(m1, FormKind::stiffness());
    const SparseMatrix k12 = assemble_matrix(m1, FormKind::mass());
    const SparseMatrix k21 = assemble_matrix(m2, FormKind::stiffness());
    const SparseMatrix k22 = assemble_matrix(m2, FormKind::mass());

    KronSumOperator op;
    op.add(1.0, k11, k22).add(1.0, k12, k21);

    const Vector f = nodal_values(spec.space, spec.forcing);
    Vector rhs;
    if (spec.rhs_mode == RhsMode::paper_fdof) {
        rhs = f.cwiseProduct(kron(assemble_vector(m1, VectorFormKind::load()),
                                  assemble_vector(m2, VectorFormKind::load())));
    } else {
        rhs = kron_apply(k12, k22, f);
    }
    return with_dirichlet(std::move(op), std::move(rhs), spec, FaceSelection{});
}

ProductSystem build_wave(const ProblemSpec& spec)
{
    if (spec.kind != ProblemKind::wave) {
        throw std::invalid_argument("assemble_wave_spacetime: problem kind is not wave");
    }
    const Mesh& space = spec.space.mesh1();
    const Mesh& time = spec.space.mesh2();
    if (time.dim() != 1) {
        throw std::invalid_argument("assemble_wave_spacetime: Omega_2 must be a 1D time interval");
    }
    const double c = spec.wave_speed;

    KronSumOperator op;
    op.add(c * c, assemble_matrix(space, FormKind::stiffness()), assemble_matrix(time, FormKind::mass()))
        .add(-1.0, assemble_matrix(space, FormKind::mass()),
             assemble_matrix(time, FormKind::temporal_stiffness_with_boundary()));

    FaceSelection sel;
    sel.exclude_omega2_end = spec.free_final_time;
    return with_dirichlet(std::move(op), Vector::Zero(spec.space.num_dofs()), spec, sel);
}

ProductSystem build_advdiff(const ProblemSpec& spec)
{
    if (spec.kind != ProblemKind::advdiff_aligned && spec.kind != ProblemKind::advdiff_general) {
        throw std::invalid_argument("assemble_advdiff_supg: problem kind is not advection-diffusion");
    }
    if (!(spec.kappa > 0.0)) {
        throw std::invalid_argument("assemble_advdiff_supg: kappa must be positive");
    }
    if (!(spec.tau >= 0.0)) {
        throw std::invalid_argument("assemble_advdiff_supg: tau must be non-negative");
    }
    const auto [b1, b2] = split_velocity(spec);
    return spec.kind == ProblemKind::advdiff_aligned ? build_advdiff_aligned(spec, b1, b2)
                                                     : build_advdiff_general(spec, b1, b2);
}

ProductSystem build_system(const ProblemSpec& spec)
{
    switch (spec.kind) {
    case ProblemKind::poisson:
        return build_poisson(spec);
    case ProblemKind::wave:
        return build_wave(spec);
    case ProblemKind::advdiff_aligned:
    case ProblemKind::advdiff_general:
        return build_advdiff(spec);
    }
    throw std::invalid_argument("build_system: unknown problem kind");
}

ConstrainedSystem finalize(const ProductSystem& system)
{
    return apply_dirichlet(materialize(system.op), system.rhs, system.constrained, system.boundary_values);
}

ConstrainedSystem assemble_poisson_product(const ProblemSpec& spec)
{
    return finalize(build_poisson(spec));
}

ConstrainedSystem assemble_wave_spacetime(const ProblemSpec& spec)
{
    return finalize(build_wave(spec));
}

ConstrainedSystem assemble_advdiff_supg(const ProblemSpec& spec)
{
    return finalize(build_advdiff(spec));
}

double compute_tau(double h, double b_norm, double kappa)
{
    if (!(h > 0.0) || !(b_norm > 0.0) || !(kappa > 0.0)) {
        throw std::invalid_argument("compute_tau: h, |b| and kappa must be positive");
    }
    const double pe = b_norm * h / (2.0 * kappa);
    // coth(x) - 1/x cancels badly for small x; below 0.1 the series
    // x/3 - x^3/45 + 2x^5/945 - x^7/4725 is accurate to about 1e-13
    double shape = 0.0;
    if (pe < 0.1) {
        const double x2 = pe * pe;
        shape = pe * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 - x2 / 4725.0)));
    } else {
        shape = 1.0 / std::tanh(pe) - 1.0 / pe;
    }
    return h / (2.0 * b_norm) * shape;
}

}  // namespace tpfem

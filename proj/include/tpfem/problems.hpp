#pragma once

#include <vector>

#include "tpfem/constraints.hpp"
#include "tpfem/linalg.hpp"
#include "tpfem/tensor.hpp"

namespace tpfem {

enum class ProblemKind { poisson, wave, advdiff_aligned, advdiff_general };

/// paper_fdof: rhs = f_dof (.) (F1 kron F2), nodal values of f times the
/// product of subdomain load vectors.
/// consistent_mass: rhs = (M1 kron M2) f_dof.
enum class RhsMode { paper_fdof, consistent_mass };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::poisson;
    ProductSpace space;
    double wave_speed = 1.0;
    double kappa = 1.0;
    /// Velocity over the full product domain: the first mesh1().dim()
    /// components act on Omega_1, the rest on Omega_2.
    std::vector<double> velocity{};
    double tau = 0.0;
    ScalarField forcing{};
    DirichletData dirichlet = DirichletData::homogeneous();
    RhsMode rhs_mode = RhsMode::paper_fdof;
    /// Wave only: leave the t = T face unconstrained.
    bool free_final_time = false;
};

/// A global system before Dirichlet conditions are applied.
struct ProductSystem {
    KronSumOperator op;
    Vector rhs;
    std::vector<Index> constrained;
    Vector boundary_values;  // full length; read only at `constrained`
};

ProductSystem build_poisson(const ProblemSpec& spec);
ProductSystem build_wave(const ProblemSpec& spec);
ProductSystem build_advdiff(const ProblemSpec& spec);
ProductSystem build_system(const ProblemSpec& spec);

/// Materializes the operator and applies the Dirichlet conditions.
ConstrainedSystem finalize(const ProductSystem& system);

/// (K11 kron K22 + K12 kron K21) U = f_dof F1 kron F2 with
/// K11 = stiffness_1, K22 = mass_2, K12 = mass_1, K21 = stiffness_2.
ConstrainedSystem assemble_poisson_product(const ProblemSpec& spec);

/// (c^2 K11 kron K22 - K12 kron K21) U = 0 with Omega_2 the time interval
/// and K21 the temporal stiffness including the endpoint flux terms.
ConstrainedSystem assemble_wave_spacetime(const ProblemSpec& spec);

/// SUPG advection-diffusion. The aligned kind requires velocity supported
/// on Omega_2 only and assembles the reduced six-term system; the general
/// kind assembles all fourteen subdomain matrices.
ConstrainedSystem assemble_advdiff_supg(const ProblemSpec& spec);

/// Classical optimal SUPG parameter (h / 2|b|) (coth Pe - 1/Pe) with the
/// element Peclet number Pe = |b| h / (2 kappa).
double compute_tau(double h, double b_norm, double kappa);

}  // namespace tpfem

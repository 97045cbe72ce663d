#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpfem/constraints.hpp"
#include "tpfem/mesh.hpp"
#include "tpfem/problems.hpp"
#include "tpfem/solve.hpp"

namespace tpfem {

enum class CaseName { poisson4d, wave2d1t, advdiff };

/// Exact solution, matching forcing and physical parameters of one
/// verification problem.
struct ManufacturedCase {
    CaseName name;
    ScalarField exact{};
    ScalarField forcing{};
    double wave_speed = 1.0;
    double kappa = 1.0;
    std::vector<double> velocity{};
};

/// u = prod_i sin(pi x_i) on the unit 4-cube, -lap u = 4 pi^2 u.
ManufacturedCase poisson4d_case();

/// u = sin(x - c t) + sin(y - c t) on (0,1)^2 x (0,T).
ManufacturedCase wave_case(double wave_speed = 1.0);

/// Boundary-layer solution of -kappa lap u + b . grad u = f with
/// b = (0, b_y) on the unit square.
ManufacturedCase advdiff_case(double kappa = 0.01, double b_y = 1.0);

/// (1 - 4 (x - 1/2)^2) [ y + (e^{b_y y / kappa} - 1) / (1 - e^{b_y / kappa}) ]
/// evaluated without overflow for small kappa.
double exact_advdiff(double x, double y, double kappa, double b_y);

struct ErrorMetrics {
    double rmse = 0.0;
    double linf = 0.0;
};

/// Nodal errors over every dof, constrained ones included.
ErrorMetrics error_metrics(const Vector& u_h, const ScalarField& exact, const ProductSpace& space);

/// ln(e_prev / e_curr) / ln(h_prev / h_curr); empty when either error is not
/// positive.
std::optional<double> convergence_rate(double e_prev, double e_curr, double h_prev, double h_curr);

/// Least-squares slope of ln(error) against ln(h).
double fitted_rate(std::span<const double> errors, std::span<const double> h);

struct ConvergenceRow {
    Index dofs = 0;
    double h = 0.0;  // grid spacing 1/n
    std::optional<double> dt;
    std::optional<double> cfl;
    double linf = 0.0;
    double rmse = 0.0;
    std::optional<double> rmse_rate;
    std::optional<double> linf_rate;
};

enum class SolverKind { direct, cg };

struct StudyOptions {
    /// Empty selects default_rhs_mode for the case.
    std::optional<RhsMode> rhs_mode;
    SolverKind solver = SolverKind::direct;
    std::optional<double> tau_override;
    Diagonal diagonal = Diagonal::right;
    /// Wave only: target c dt / h used to pick the number of time cells.
    double cfl = 0.57;
    double final_time = 1.0;
    bool free_final_time = false;
    double cg_tolerance = 1e-10;
};

/// Default rhs mode for a case: consistent mass for Poisson, nodal f_dof
/// otherwise.
RhsMode default_rhs_mode(CaseName name);

/// One solved resolution, kept for post-processing.
struct CaseRun {
    ProductSpace space;
    Vector solution;
    ConvergenceRow row;
    double tau = 0.0;
    SolveReport report;
};

ProblemSpec make_problem(const ManufacturedCase& mc, int n, const StudyOptions& options);
CaseRun run_resolution(const ManufacturedCase& mc, int n, const StudyOptions& options);

/// Solves every resolution and fills rates from consecutive rows. Solver
/// failures are rethrown as SolverError naming the resolution.
std::vector<ConvergenceRow> run_study(const ManufacturedCase& mc, std::span<const int> resolutions,
                                      const StudyOptions& options);

std::string to_string(CaseName name);

}  // namespace tpfem

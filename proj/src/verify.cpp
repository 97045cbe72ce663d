#include "tpfem/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace tpfem {

namespace {

using std::numbers::pi;

/// Bracket term y + (e^{r y} - 1) / (1 - e^r) with r = b_y / kappa and its
/// first two derivatives.
struct LayerProfile {
    double value;
    double d1;
    double d2;
};

LayerProfile layer_profile(double y, double kappa, double b_y)
{
    const double r = b_y / kappa;
    double ratio = 0.0;    // (e^{ry} - 1) / (1 - e^r)
    double scaled = 0.0;   // e^{ry} / (1 - e^r)
    if (r > 0.0) {
        const double den = std::expm1(-r);  // e^{-r} - 1
        ratio = (std::exp(r * (y - 1.0)) - std::exp(-r)) / den;
        scaled = std::exp(r * (y - 1.0)) / den;
    } else {
        const double den = -std::expm1(r);  // 1 - e^r
        ratio = std::expm1(r * y) / den;
        scaled = std::exp(r * y) / den;
    }
    return {y + ratio, 1.0 + r * scaled, r * r * scaled};
}

SolveReport solve_system(const ProductSystem& sys, const StudyOptions& options)
{
    if (options.solver == SolverKind::direct) {
        const ConstrainedSystem cs = finalize(sys);
        return solve_direct(cs.matrix, cs.rhs);
    }
    Vector b = sys.rhs;
    for (Index d : sys.constrained) {
        b[d] = sys.boundary_values[d];
    }
    CgOptions cg;
    cg.tol = options.cg_tolerance;
    return solve_cg(sys.op, b, sys.constrained, cg);
}

}  // namespace

double exact_advdiff(double x, double y, double kappa, double b_y)
{
    return (1.0 - 4.0 * (x - 0.5) * (x - 0.5)) * layer_profile(y, kappa, b_y).value;
}

ManufacturedCase poisson4d_case()
{
    ManufacturedCase mc{CaseName::poisson4d, {}, {}};
    mc.exact = [](std::span<const double> x) {
        double u = 1.0;
        for (double v : x) {
            u *= std::sin(pi * v);
        }
        return u;
    };
    mc.forcing = [exact = mc.exact](std::span<const double> x) { return 4.0 * pi * pi * exact(x); };
    return mc;
}

ManufacturedCase wave_case(double wave_speed)
{
    ManufacturedCase mc{CaseName::wave2d1t, {}, {}};
    mc.wave_speed = wave_speed;
    mc.exact = [c = wave_speed](std::span<const double> p) {
        return std::sin(p[0] - c * p[2]) + std::sin(p[1] - c * p[2]);
    };
    mc.forcing = [](std::span<const double>) { return 0.0; };
    return mc;
}

ManufacturedCase advdiff_case(double kappa, double b_y)
{
    if (!(kappa > 0.0) || b_y == 0.0) {
        throw std::invalid_argument("advdiff_case: requires kappa > 0 and b_y != 0");
    }
    ManufacturedCase mc{CaseName::advdiff, {}, {}};
    mc.kappa = kappa;
    mc.velocity = {0.0, b_y};
    mc.exact = [kappa, b_y](std::span<const double> p) { return exact_advdiff(p[0], p[1], kappa, b_y); };
    // f = -kappa (p'' g + p g'') + b_y p g' with p(x) = 1 - 4 (x - 1/2)^2
    mc.forcing = [kappa, b_y](std::span<const double> p) {
        const double px = 1.0 - 4.0 * (p[0] - 0.5) * (p[0] - 0.5);
        const LayerProfile g = layer_profile(p[1], kappa, b_y);
        return -kappa * (-8.0 * g.value + px * g.d2) + b_y * px * g.d1;
    };
    return mc;
}

ErrorMetrics error_metrics(const Vector& u_h, const ScalarField& exact, const ProductSpace& space)
{
    if (u_h.size() != space.num_dofs()) {
        throw std::invalid_argument("error_metrics: solution length does not match the product space");
    }
    double sum = 0.0;
    double worst = 0.0;
    for (Index g = 0; g < space.num_dofs(); ++g) {
        const double e = u_h[g] - exact(space.point(g).coords());
        sum += e * e;
        worst = std::max(worst, std::abs(e));
    }
    return {std::sqrt(sum / static_cast<double>(space.num_dofs())), worst};
}

std::optional<double> convergence_rate(double e_prev, double e_curr, double h_prev, double h_curr)
{
    if (!(h_prev > 0.0) || !(h_curr > 0.0) || !(h_curr < h_prev)) {
        throw std::invalid_argument("convergence_rate: requires 0 < h_curr < h_prev");
    }
    if (!(e_prev > 0.0) || !(e_curr > 0.0)) {
        return std::nullopt;
    }
    return std::log(e_prev / e_curr) / std::log(h_prev / h_curr);
}

double fitted_rate(std::span<const double> errors, std::span<const double> h)
{
    if (errors.size() != h.size() || errors.size() < 2) {
        throw std::invalid_argument("fitted_rate: needs at least two (h, error) pairs");
    }
    const auto n = static_cast<double>(h.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        mx += std::log(h[i]) / n;
        my += std::log(errors[i]) / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double dx = std::log(h[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

RhsMode default_rhs_mode(CaseName name)
{
    return name == CaseName::poisson4d ? RhsMode::consistent_mass : RhsMode::paper_fdof;
}

ProblemSpec make_problem(const ManufacturedCase& mc, int n, const StudyOptions& options)
{
    if (n < 1) {
        throw std::invalid_argument("resolution must be >= 1, got " + std::to_string(n));
    }
    switch (mc.name) {
    case CaseName::poisson4d: {
        ProblemSpec spec{.kind = ProblemKind::poisson,
                         .space = ProductSpace(unit_square_mesh(n, n, options.diagonal),
                                               unit_square_mesh(n, n, options.diagonal))};
        spec.forcing = mc.forcing;
        spec.dirichlet = DirichletData{mc.exact};
        spec.rhs_mode = options.rhs_mode.value_or(default_rhs_mode(mc.name));
        return spec;
    }
    case CaseName::wave2d1t: {
        if (!(options.cfl > 0.0) || !(options.final_time > 0.0)) {
            throw std::invalid_argument("wave study: cfl and final time must be positive");
        }
        const double cells = mc.wave_speed * options.final_time * n / options.cfl;
        const int nt = std::max(1, static_cast<int>(std::lround(cells)));
        ProblemSpec spec{.kind = ProblemKind::wave,
                         .space = ProductSpace(unit_square_mesh(n, n, options.diagonal),
                                               interval_mesh(nt, 0.0, options.final_time))};
        spec.wave_speed = mc.wave_speed;
        spec.forcing = mc.forcing;
        spec.dirichlet = DirichletData{mc.exact};
        spec.rhs_mode = options.rhs_mode.value_or(default_rhs_mode(mc.name));
        spec.free_final_time = options.free_final_time;
        return spec;
    }
    case CaseName::advdiff: {
        ProblemSpec spec{.kind = ProblemKind::advdiff_aligned,
                         .space = ProductSpace(interval_mesh(n), interval_mesh(n))};
        spec.kappa = mc.kappa;
        spec.velocity = mc.velocity;
        spec.forcing = mc.forcing;
        spec.dirichlet = DirichletData{mc.exact};
        spec.rhs_mode = options.rhs_mode.value_or(default_rhs_mode(mc.name));
        double b_norm = 0.0;
        for (double v : mc.velocity) {
            b_norm += v * v;
        }
        spec.tau = options.tau_override ? *options.tau_override
                                        : compute_tau(spec.space.mesh2().h(), std::sqrt(b_norm), mc.kappa);
        return spec;
    }
    }
    throw std::invalid_argument("make_problem: unknown case");
}

CaseRun run_resolution(const ManufacturedCase& mc, int n, const StudyOptions& options)
{
    if (options.solver == SolverKind::cg && mc.name != CaseName::poisson4d) {
        throw std::invalid_argument("the cg solver requires a symmetric positive definite system (poisson4d only)");
    }
    ProblemSpec spec = make_problem(mc, n, options);
    const ProductSystem sys = build_system(spec);

    SolveReport report;
    try {
        report = solve_system(sys, options);
    } catch (const SolverError& e) {
        throw SolverError("resolution " + std::to_string(n) + ": " + e.what());
    }

    const ErrorMetrics err = error_metrics(report.solution, mc.exact, spec.space);
    ConvergenceRow row;
    row.dofs = spec.space.num_dofs();
    row.h = 1.0 / n;
    row.linf = err.linf;
    row.rmse = err.rmse;
    if (mc.name == CaseName::wave2d1t) {
        const double dt = options.final_time / static_cast<double>(spec.space.mesh2().num_cells());
        row.dt = dt;
        row.cfl = mc.wave_speed * dt / row.h;
    }
    Vector solution = report.solution;
    return CaseRun{std::move(spec.space), std::move(solution), row, spec.tau, std::move(report)};
}

std::vector<ConvergenceRow> run_study(const ManufacturedCase& mc, std::span<const int> resolutions,
                                      const StudyOptions& options)
{
    if (resolutions.empty()) {
        throw std::invalid_argument("run_study: no resolutions given");
    }
    if (!std::is_sorted(resolutions.begin(), resolutions.end(), std::less_equal<>())) {
        throw std::invalid_argument("run_study: resolutions must be strictly increasing");
    }
    std::vector<ConvergenceRow> rows;
    rows.reserve(resolutions.size());
    for (int n : resolutions) {
        rows.push_back(run_resolution(mc, n, options).row);
        if (rows.size() > 1) {
            const ConvergenceRow& prev = rows[rows.size() - 2];
            ConvergenceRow& cur = rows.back();
            cur.rmse_rate = convergence_rate(prev.rmse, cur.rmse, prev.h, cur.h);
            cur.linf_rate = convergence_rate(prev.linf, cur.linf, prev.h, cur.h);
        }
    }
    return rows;
}

std::string to_string(CaseName name)
{
    switch (name) {
    case CaseName::poisson4d:
        return "poisson4d";
    case CaseName::wave2d1t:
        return "wave";
    case CaseName::advdiff:
        return "advdiff";
    }
    return "unknown";
}

}  // namespace tpfem

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "tpfem/verify.hpp"

namespace tpfem {
namespace {

using std::numbers::pi;

// pde(exact) - forcing at a point, derivatives by sixth-order differences
template <typename Residual>
void expect_consistent_at_random_points(Residual residual, int dim, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int k = 0; k < 100; ++k) {
        std::array<double, 4> p{};
        for (int d = 0; d < dim; ++d) {
            p[static_cast<std::size_t>(d)] = u(rng);
        }
        const auto [value, scale] = residual(p);
        EXPECT_LE(std::abs(value), 1e-6 * std::max(1.0, scale)) << "point " << k;
    }
}

TEST(ExactAdvDiff, VanishesOnTheBoundary)
{
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
        EXPECT_EQ(exact_advdiff(t, 0.0, 0.01, 1.0), 0.0);
        EXPECT_EQ(exact_advdiff(0.0, t, 0.01, 1.0), 0.0);
        EXPECT_EQ(exact_advdiff(1.0, t, 0.01, 1.0), 0.0);
        EXPECT_NEAR(exact_advdiff(t, 1.0, 0.01, 1.0), 0.0, 1e-15);
    }
    EXPECT_NEAR(exact_advdiff(0.5, 1.0, 0.01, 1.0), 0.0, 1e-15);
}

TEST(ExactAdvDiff, FiniteForSmallDiffusionAndMatchesDirectFormula)
{
    for (double y = 0.0; y <= 1.0; y += 0.05) {
        EXPECT_TRUE(std::isfinite(exact_advdiff(0.3, y, 1e-4, 1.0)));
        EXPECT_TRUE(std::isfinite(exact_advdiff(0.3, y, 1e-4, -1.0)));
        // kappa large enough for the naive expression to be safe
        const double naive = 0.84 * (y + (std::exp(y / 0.2) - 1.0) / (1.0 - std::exp(1.0 / 0.2)));
        EXPECT_NEAR(exact_advdiff(0.3, y, 0.2, 1.0), naive, 1e-14);
    }
    EXPECT_THROW(advdiff_case(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(advdiff_case(0.01, 0.0), std::invalid_argument);
}

TEST(Forcing, AdvDiffIsConsistent)
{
    for (double kappa : {0.1, 0.01}) {
        const ManufacturedCase mc = advdiff_case(kappa, 1.0);
        const double h = kappa * 0.02;
        expect_consistent_at_random_points(
            [&](const std::array<double, 4>& p) {
                const auto ux = [&](double x) { return exact_advdiff(x, p[1], kappa, 1.0); };
                const auto uy = [&](double y) { return exact_advdiff(p[0], y, kappa, 1.0); };
                const double lap = oracle::d2(ux, p[0], h) + oracle::d2(uy, p[1], h);
                const double f = mc.forcing(std::span<const double>(p.data(), 2));
                return std::pair{-kappa * lap + oracle::d1(uy, p[1], h) - f, std::abs(f)};
            },
            2, 17);
    }
}

TEST(Forcing, PoissonIsConsistent)
{
    const ManufacturedCase mc = poisson4d_case();
    expect_consistent_at_random_points(
        [&](const std::array<double, 4>& p) {
            double lap = 0.0;
            for (std::size_t d = 0; d < 4; ++d) {
                const auto along = [&](double t) {
                    std::array<double, 4> q = p;
                    q[d] = t;
                    return mc.exact(q);
                };
                lap += oracle::d2(along, p[d], 1e-3);
            }
            const double f = mc.forcing(p);
            return std::pair{-lap - f, std::abs(f)};
        },
        4, 23);
}

TEST(Forcing, WaveSatisfiesTheHomogeneousEquation)
{
    const ManufacturedCase mc = wave_case(1.7);
    expect_consistent_at_random_points(
        [&](const std::array<double, 4>& p) {
            const auto along = [&](std::size_t d) {
                return [&, d](double t) {
                    std::array<double, 4> q = p;
                    q[d] = t;
                    return mc.exact(std::span<const double>(q.data(), 3));
                };
            };
            const double utt = oracle::d2(along(2), p[2], 1e-3);
            const double lap = oracle::d2(along(0), p[0], 1e-3) + oracle::d2(along(1), p[1], 1e-3);
            const double f = mc.forcing(std::span<const double>(p.data(), 3));
            return std::pair{utt - 1.7 * 1.7 * lap - f, 1.0};
        },
        3, 29);
}

TEST(ErrorMetrics, Examples)
{
    const ProductSpace s4(interval_mesh(1), interval_mesh(1));
    const ScalarField zero = [](std::span<const double>) { return 0.0; };
    Vector e(4);
    e << 3, 4, 3, 4;
    const ErrorMetrics m = error_metrics(e, zero, s4);
    EXPECT_NEAR(m.rmse, std::sqrt(12.5), 1e-15);
    EXPECT_EQ(m.linf, 4.0);
    EXPECT_NEAR(std::sqrt(12.5), 3.5355, 1e-4);

    const ScalarField lin = [](std::span<const double> x) { return x[0] + 2 * x[1]; };
    Vector exact(4);
    for (Index g = 0; g < 4; ++g) {
        exact[g] = lin(s4.point(g).coords());
    }
    const ErrorMetrics z = error_metrics(exact, lin, s4);
    EXPECT_EQ(z.rmse, 0.0);
    EXPECT_EQ(z.linf, 0.0);
    EXPECT_THROW(error_metrics(Vector::Zero(3), zero, s4), std::invalid_argument);
}

TEST(ConvergenceRate, Examples)
{
    EXPECT_NEAR(*convergence_rate(1.0, 0.5, 0.2, 0.1), 1.0, 1e-15);
    EXPECT_NEAR(*convergence_rate(1.0, 0.25, 0.2, 0.1), 2.0, 1e-15);
    // consecutive rows of the Poisson reference values with h = 1/n; the
    // errors are printed to 3 digits, which moves the rate by up to ~0.04
    EXPECT_NEAR(*convergence_rate(1.61e-2, 1.21e-2, 1.0 / 5, 1.0 / 6), 1.57, 0.02);
    EXPECT_NEAR(*convergence_rate(1.21e-2, 9.39e-3, 1.0 / 6, 1.0 / 7), 1.65, 0.02);
    EXPECT_FALSE(convergence_rate(0.0, 1e-3, 0.2, 0.1).has_value());
    EXPECT_FALSE(convergence_rate(1e-3, 0.0, 0.2, 0.1).has_value());
    EXPECT_THROW(convergence_rate(1.0, 0.5, 0.1, 0.2), std::invalid_argument);
    EXPECT_THROW(convergence_rate(1.0, 0.5, 0.1, 0.0), std::invalid_argument);
}

TEST(ConvergenceRate, ScaleInvariant)
{
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double a = u(rng);
        const double b = u(rng);
        const double s = std::exp(10.0 * (u(rng) - 0.5));
        EXPECT_NEAR(*convergence_rate(a, b, 0.3, 0.2), *convergence_rate(s * a, s * b, 0.3, 0.2), 1e-12);
    }
}

TEST(FittedRate, RecoversPowerLaw)
{
    const std::vector<double> h{1.0 / 15, 1.0 / 25, 1.0 / 50};
    std::vector<double> e;
    for (double v : h) {
        e.push_back(3.0 * std::pow(v, 1.93));
    }
    EXPECT_NEAR(fitted_rate(e, h), 1.93, 1e-12);
    // two points reduce to the consecutive rate
    const std::vector<double> e2{0.2, 0.06};
    const std::vector<double> h2{0.5, 0.25};
    EXPECT_NEAR(fitted_rate(e2, h2), *convergence_rate(0.2, 0.06, 0.5, 0.25), 1e-14);
    EXPECT_THROW(fitted_rate(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(RunStudy, PoissonDofCounts)
{
    const std::vector<int> n{1, 2};
    StudyOptions opts;
    const auto rows = run_study(poisson4d_case(), n, opts);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].dofs, 16);
    EXPECT_EQ(rows[1].dofs, 81);
    EXPECT_FALSE(rows[0].rmse_rate.has_value());
    EXPECT_FALSE(rows[0].dt.has_value());
    // n = 1 has no interior dof: the solution is the boundary data
    EXPECT_NEAR(rows[0].rmse, 0.0, 1e-15);

    const std::vector<int> three{3};
    const auto r3 = run_study(poisson4d_case(), three, opts);
    EXPECT_EQ(r3[0].dofs, 256);
    EXPECT_NEAR(r3[0].h, 1.0 / 3, 1e-15);
}

TEST(RunStudy, WaveRowMetadata)
{
    const std::vector<int> n{4};
    const auto rows = run_study(wave_case(1.0), n, {});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].dofs, 200);
    EXPECT_NEAR(*rows[0].dt, 1.0 / 7, 1e-15);
    EXPECT_NEAR(*rows[0].cfl, 4.0 / 7, 1e-15);
}

TEST(RunStudy, AdvDiffCoarsestRow)
{
    const std::vector<int> n{2};
    const auto rows = run_study(advdiff_case(), n, {});
    EXPECT_EQ(rows[0].dofs, 9);
    EXPECT_NEAR(rows[0].rmse, 8.33e-2, 0.005e-2);
    EXPECT_NEAR(rows[0].linf, 2.50e-1, 0.005e-1);
}

TEST(RunStudy, RejectsBadInputAndNamesFailingResolution)
{
    EXPECT_THROW(run_study(poisson4d_case(), std::vector<int>{}, {}), std::invalid_argument);
    EXPECT_THROW(run_study(poisson4d_case(), std::vector<int>{3, 3}, {}), std::invalid_argument);
    EXPECT_THROW(run_study(wave_case(), std::vector<int>{2}, StudyOptions{.solver = SolverKind::cg}),
                 std::invalid_argument);

    StudyOptions opts;
    opts.solver = SolverKind::cg;
    opts.cg_tolerance = 0.0;
    try {
        run_study(poisson4d_case(), std::vector<int>{3}, opts);
        FAIL() << "expected a solver failure";
    } catch (const SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("resolution 3"), std::string::npos) << e.what();
    }
}

TEST(RunStudy, DefaultRhsModes)
{
    EXPECT_EQ(default_rhs_mode(CaseName::poisson4d), RhsMode::consistent_mass);
    EXPECT_EQ(default_rhs_mode(CaseName::advdiff), RhsMode::paper_fdof);
    EXPECT_EQ(to_string(CaseName::wave2d1t), "wave");
}

}  // namespace
}  // namespace tpfem

#include "tpfem/run.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tpfem {

namespace {

std::string optional_field(const std::optional<double>& v)
{
    return v ? fmt::format("{:.10g}", *v) : std::string();
}

std::string optional_cell(const std::optional<double>& v, const char* spec)
{
    return v ? fmt::format(fmt::runtime(spec), *v) : std::string("-");
}

template <typename Enum>
Enum lookup(const std::map<std::string, Enum>& table, const std::string& key, const char* flag)
{
    const auto it = table.find(key);
    if (it == table.end()) {
        throw std::invalid_argument(std::string(flag) + ": unknown value '" + key + "'");
    }
    return it->second;
}

const std::map<std::string, CaseName> case_names{
    {"poisson4d", CaseName::poisson4d}, {"wave", CaseName::wave2d1t}, {"advdiff", CaseName::advdiff}};
const std::map<std::string, SolverKind> solver_names{{"direct", SolverKind::direct}, {"cg", SolverKind::cg}};
const std::map<std::string, RhsMode> rhs_names{{"paper_fdof", RhsMode::paper_fdof},
                                               {"consistent_mass", RhsMode::consistent_mass}};
const std::map<std::string, Diagonal> diagonal_names{
    {"right", Diagonal::right}, {"left", Diagonal::left}, {"crossed", Diagonal::crossed}};

template <typename Enum>
std::vector<std::string> keys(const std::map<std::string, Enum>& table)
{
    std::vector<std::string> k;
    for (const auto& [name, value] : table) {
        k.push_back(name);
    }
    return k;
}

}  // namespace

std::vector<int> table_resolutions(CaseName name)
{
    switch (name) {
    case CaseName::poisson4d:
        return {3, 5, 6, 7, 8, 10, 11};
    case CaseName::wave2d1t:
        return {4, 8, 12, 16};
    case CaseName::advdiff:
        return {2, 3, 4, 5, 6, 15, 25, 50};
    }
    return {};
}

void validate(const RunConfig& config)
{
    if (config.resolutions.empty()) {
        throw std::invalid_argument("--resolutions: at least one resolution is required");
    }
    for (std::size_t i = 0; i < config.resolutions.size(); ++i) {
        if (config.resolutions[i] < 1) {
            throw std::invalid_argument("--resolutions: every resolution must be >= 1");
        }
        if (i > 0 && config.resolutions[i] <= config.resolutions[i - 1]) {
            throw std::invalid_argument("--resolutions: values must be strictly increasing");
        }
    }
    if (config.study.solver == SolverKind::cg && config.case_name != CaseName::poisson4d) {
        throw std::invalid_argument("--solver: cg is only available for the symmetric poisson4d case");
    }
    if (config.study.tau_override && !(*config.study.tau_override >= 0.0)) {
        throw std::invalid_argument("--tau: must be non-negative");
    }
    if (!(config.study.cfl > 0.0)) {
        throw std::invalid_argument("--cfl: must be positive");
    }
    if (!(config.study.final_time > 0.0)) {
        throw std::invalid_argument("--final-time: must be positive");
    }
    if (!(config.kappa > 0.0)) {
        throw std::invalid_argument("--kappa: must be positive");
    }
    if (!(config.wave_speed > 0.0)) {
        throw std::invalid_argument("--wave-speed: must be positive");
    }
    if (config.output_path.empty()) {
        throw std::invalid_argument("--out: output path is empty");
    }
}

ManufacturedCase make_case(const RunConfig& config)
{
    switch (config.case_name) {
    case CaseName::poisson4d:
        return poisson4d_case();
    case CaseName::wave2d1t:
        return wave_case(config.wave_speed);
    case CaseName::advdiff:
        return advdiff_case(config.kappa, 1.0);
    }
    throw std::invalid_argument("--case: unknown case");
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows)
{
    os << "dofs,h,dt,cfl,linf,rmse,rmse_rate,linf_rate\n";
    for (const auto& r : rows) {
        os << fmt::format("{},{:.10g},{},{},{:.10g},{:.10g},{},{}\n", r.dofs, r.h, optional_field(r.dt),
                          optional_field(r.cfl), r.linf, r.rmse, optional_field(r.rmse_rate),
                          optional_field(r.linf_rate));
    }
}

void write_table(std::ostream& os, const std::vector<ConvergenceRow>& rows)
{
    const bool wave = !rows.empty() && rows.front().dt.has_value();
    if (wave) {
        os << fmt::format("{:>8} {:>7} {:>7} {:>6} {:>11} {:>11} {:>9} {:>9}\n", "dofs", "h", "dt", "CFL", "l_inf",
                          "RMSE", "RMSE rate", "linf rate");
    } else {
        os << fmt::format("{:>8} {:>7} {:>11} {:>11} {:>9} {:>9}\n", "dofs", "h", "l_inf", "RMSE", "RMSE rate",
                          "linf rate");
    }
    for (const auto& r : rows) {
        if (wave) {
            os << fmt::format("{:>8} {:>7.3f} {:>7.3f} {:>6.2f} {:>11.3e} {:>11.3e} {:>9} {:>9}\n", r.dofs, r.h,
                              r.dt.value_or(0.0), r.cfl.value_or(0.0), r.linf, r.rmse,
                              optional_cell(r.rmse_rate, "{:.2f}"), optional_cell(r.linf_rate, "{:.2f}"));
        } else {
            os << fmt::format("{:>8} {:>7.3f} {:>11.3e} {:>11.3e} {:>9} {:>9}\n", r.dofs, r.h, r.linf, r.rmse,
                              optional_cell(r.rmse_rate, "{:.2f}"), optional_cell(r.linf_rate, "{:.2f}"));
        }
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    std::vector<ConvergenceRow> rows;
    try {
        validate(config);
        rows = run_study(make_case(config), config.resolutions, config.study);
    } catch (const SolverError& e) {
        err << "error: solver failure: " << e.what() << '\n';
        return exit_solver_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return exit_config_error;
    }

    std::ofstream csv(config.output_path, std::ios::binary | std::ios::trunc);
    if (!csv) {
        err << "error: cannot open '" << config.output_path << "' for writing\n";
        return exit_io_failure;
    }
    write_csv(csv, rows);
    csv.close();
    if (!csv) {
        err << "error: failed writing '" << config.output_path << "'\n";
        return exit_io_failure;
    }
    write_table(out, rows);
    return exit_success;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Tensor-product P1 finite element convergence studies"};
    app.set_config("--config", "", "Read options from a key = value file; command-line flags take precedence");

    std::string case_name = "poisson4d";
    std::vector<int> resolutions;
    std::string solver = "direct";
    std::string rhs_mode;
    std::optional<double> tau;
    std::string diagonal = "right";
    std::string final_face = "dirichlet";
    RunConfig config;

    app.add_option("--case", case_name, "Verification case")
        ->check(CLI::IsMember(keys(case_names)))
        ->capture_default_str();
    auto* res_opt = app.add_option("--resolutions", resolutions,
                                   "Comma-separated subdivisions per axis, strictly increasing "
                                   "(default: the case's table resolutions)")
                        ->delimiter(',');
    app.add_option("--solver", solver, "Linear solver; cg runs matrix-free and is poisson4d only")
        ->check(CLI::IsMember(keys(solver_names)))
        ->capture_default_str();
    app.add_option("--rhs-mode", rhs_mode,
                   "Right-hand side: paper_fdof or consistent_mass "
                   "(default: consistent_mass for poisson4d, paper_fdof otherwise)")
        ->check(CLI::IsMember(keys(rhs_names)));
    app.add_option("--tau", tau, "SUPG parameter override (default: optimal element value)");
    app.add_option("--diagonal", diagonal, "Unit-square triangulation pattern")
        ->check(CLI::IsMember(keys(diagonal_names)))
        ->capture_default_str();
    app.add_option("--out", config.output_path, "CSV output path")->capture_default_str();
    app.add_option("--cfl", config.study.cfl, "Wave: target c*dt/h, sets the time cell count")->capture_default_str();
    app.add_option("--final-time", config.study.final_time, "Wave: time horizon T")->capture_default_str();
    app.add_option("--wave-speed", config.wave_speed, "Wave: propagation speed c")->capture_default_str();
    app.add_option("--wave-final-face", final_face, "Wave: t=T face treatment")
        ->check(CLI::IsMember({"dirichlet", "free"}))
        ->capture_default_str();
    app.add_option("--kappa", config.kappa, "Advection-diffusion: diffusivity")->capture_default_str();

    std::vector<const char*> argv;
    argv.push_back("tpfem");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_success;
    } catch (const CLI::ParseError& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return exit_config_error;
    }

    try {
        config.case_name = lookup(case_names, case_name, "--case");
        config.study.solver = lookup(solver_names, solver, "--solver");
        if (!rhs_mode.empty()) {
            config.study.rhs_mode = lookup(rhs_names, rhs_mode, "--rhs-mode");
        }
        config.study.diagonal = lookup(diagonal_names, diagonal, "--diagonal");
        config.study.tau_override = tau;
        config.study.free_final_time = final_face == "free";
        config.resolutions = res_opt->count() > 0 ? resolutions : table_resolutions(config.case_name);
    } catch (const std::invalid_argument& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return exit_config_error;
    }
    return run(config, out, err);
}

}  // namespace tpfem

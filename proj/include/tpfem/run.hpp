#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tpfem/verify.hpp"

namespace tpfem {

enum ExitCode : int {
    exit_success = 0,
    exit_config_error = 1,
    exit_solver_failure = 2,
    exit_io_failure = 3,
};

struct RunConfig {
    CaseName case_name = CaseName::poisson4d;
    std::vector<int> resolutions;
    StudyOptions study;
    double wave_speed = 1.0;
    double kappa = 0.01;
    std::string output_path = "convergence.csv";
};

/// Reference resolutions for a case.
std::vector<int> table_resolutions(CaseName name);

/// Throws std::invalid_argument naming the offending field.
void validate(const RunConfig& config);

ManufacturedCase make_case(const RunConfig& config);

/// `dofs,h,dt,cfl,linf,rmse,rmse_rate,linf_rate`; empty fields where a
/// value does not apply.
void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_table(std::ostream& os, const std::vector<ConvergenceRow>& rows);

/// Runs the study, writes the CSV and mirrors a table to `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses command-line flags (and an optional --config key = value file),
/// then runs. Returns the process exit code.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tpfem

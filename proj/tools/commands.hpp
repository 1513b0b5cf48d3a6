// commands.hpp: the tool's subcommands; each returns the process exit status

#pragma once

#include "config.hpp"

#include "hopspec/validation.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace hopspec::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kConfigError = 2, kSolverError = 3 };

struct RunOptions {
    int threads{0};
    std::optional<std::string> output_stem;  // overrides output.stem
};

// Writes <stem>.csv and, unless disabled, <stem>.meta.json. Throws ConfigError / SolverError.
struct RunOutcome {
    std::filesystem::path csv;
    std::filesystem::path meta;
    double residual_max{0.0};
    double wall_seconds{0.0};
};

RunOutcome run_spectrum(const RunConfig& config, const RunOptions& options);
RunOutcome run_sweep(const RunConfig& config, const RunOptions& options);

struct AnalyticRequest {
    Geometry geometry{Geometry::Linear};
    int n{1};
    double v{1.0};
    double theta{0.0};
    std::optional<std::filesystem::path> csv;
};

int cmd_spectrum(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_analytic(const AnalyticRequest& request, std::ostream& out, std::ostream& err);

struct ValidateRequest {
    ValidationOptions options;
    std::optional<std::filesystem::path> report_json;
    std::optional<std::filesystem::path> figures_dir;
    std::string figure_filter;
};

int cmd_validate(const ValidateRequest& request, std::ostream& out, std::ostream& err);

}  // namespace hopspec::cli

// validation.hpp: the acceptance matrix, shared by `hopspec validate` and the acceptance test binary

#pragma once

#include "hopspec/spectrum.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hopspec {

enum class Profile { Quick, Full };

std::string_view to_string(Profile p) noexcept;
Profile parse_profile(std::string_view text);

// Deliberate breakage, used to demonstrate that the checks can fail.
struct FaultInjection {
    bool flip_decay_sign{false};      // Laplace side runs with conj(decay)
    std::optional<int> forced_e_max;  // lower truncation level in the convergence check
};

struct CriterionResult {
    int id{0};
    std::string name;
    bool passed{false};
    std::string summary;
    nlohmann::json measured = nlohmann::json::object();
    double seconds{0.0};
};

struct ValidationOptions {
    Profile profile{Profile::Quick};
    int workers{0};
    FaultInjection faults;
    std::vector<int> only;  // criterion ids; empty runs all
    std::function<void(const CriterionResult&)> on_result;
};

struct ValidationReport {
    std::vector<CriterionResult> results;

    bool all_passed() const noexcept;
    nlohmann::json to_json() const;
};

inline constexpr int kCriterionCount = 9;

// "PASS  4 time-vs-frequency  max|dc| = 1.2e-09 (tol 1e-06)  [12.3 s]"
std::string format_result_line(const CriterionResult& r);

CriterionResult check_analytic_tables(const ValidationOptions& o);
CriterionResult check_markov_limit(const ValidationOptions& o);
CriterionResult check_undamped_monomer(const ValidationOptions& o);
CriterionResult check_time_domain(const ValidationOptions& o);
CriterionResult check_sum_rule(const ValidationOptions& o);
CriterionResult check_truncation(const ValidationOptions& o);
CriterionResult check_splitting(const ValidationOptions& o);
CriterionResult check_basis_counts(const ValidationOptions& o);
CriterionResult check_determinism(const ValidationOptions& o);

CriterionResult run_criterion(int id, const ValidationOptions& o);
ValidationReport run_validation(const ValidationOptions& o);

// 2-D data grids (60 axis values x 400 frequencies) for the standard parameter scans.
struct FigureRecipe {
    std::string name;
    Model model;
    ParameterAxis axis;
};

std::vector<FigureRecipe> figure_recipes();
// Writes <dir>/<name>.csv for every recipe whose name contains `filter`; returns the files written.
std::vector<std::filesystem::path> write_figure_grids(const std::filesystem::path& dir, int workers,
                                                      std::string_view filter = {});

}  // namespace hopspec

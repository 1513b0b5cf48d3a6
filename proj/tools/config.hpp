// config.hpp: run configuration for the command-line tool
//
// The file is YAML (JSON is accepted too, so a .meta.json sidecar can be fed back):
//
//   model:    { N: 2, geometry: linear, V: 1.0, theta: 0.0, site_energies: [], dipoles: [] }
//   bath:     { g: 1.0, gamma: 1.0, omega: 1.0, terms: [] }
//   numerics: { e_max: 12, epsilon: 0.01, omega_min: -4, omega_max: 6, omega_points: 2001, ... }
//   sweep:    { axis: gamma, values: [...] }  or  { axis: gamma, min: 0.01, max: 10, count: 60, spacing: log }
//   output:   { stem: spectrum, metadata: true }
//
// Unknown sections or keys are errors.

#pragma once

#include "hopspec/errors.hpp"
#include "hopspec/solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hopspec::cli {

struct TermConfig {
    double g{1.0};
    double gamma{1.0};
    double omega{1.0};
};

struct RunConfig {
    struct {
        int N{1};
        Geometry geometry{Geometry::Linear};
        double V{1.0};
        double theta{0.0};
        std::vector<double> site_energies;
        std::vector<double> dipoles;
    } model;

    struct {
        double g{1.0};
        double gamma{1.0};
        double omega{1.0};
        std::vector<TermConfig> terms;  // when non-empty, replaces the single g/gamma/omega term
    } bath;

    struct {
        int e_max{12};
        double epsilon{0.01};
        double omega_min{-4.0};
        double omega_max{6.0};
        int omega_points{2001};
        SolverStrategy solver{SolverStrategy::Auto};
        double tolerance{1e-10};
        long long direct_threshold{200'000};
        int max_iterations{10'000};
        HierarchyScaling scaling{HierarchyScaling::Normalized};
        long long unknown_cap{5'000'000};
    } numerics;

    struct {
        std::optional<AxisName> axis;
        std::vector<double> values;
        std::optional<double> min;
        std::optional<double> max;
        int count{0};
        std::string spacing{"linear"};
    } sweep;

    struct {
        std::string stem{"spectrum"};
        bool metadata{true};
    } output;

    // Throws ConfigError naming the offending key.
    void validate() const;

    Model to_model() const;
    std::vector<double> omega_grid() const;
    std::optional<ParameterAxis> axis() const;
    SweepPlan to_plan(int workers) const;

    nlohmann::json to_json() const;
    // Commented YAML listing every key with its current value.
    std::string to_text() const;
};

RunConfig parse_config(std::string_view text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

// "section.key=value", value in YAML syntax ("0.5", "[1, 2]", "ring").
void apply_override(RunConfig& config, std::string_view assignment);

}  // namespace hopspec::cli

#include "commands.hpp"

#include "hopspec/io.hpp"
#include "hopspec/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

namespace hopspec::cli {

namespace {

std::filesystem::path with_suffix(const std::string& stem, const char* suffix) { return stem + suffix; }

RunOutcome run(const RunConfig& config, const RunOptions& options) {
    config.validate();
    const std::string stem = options.output_stem.value_or(config.output.stem);
    const auto t0 = std::chrono::steady_clock::now();
    SpectrumResult result = compute_spectrum(config.to_model(), config.to_plan(options.threads));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    RunOutcome out;
    out.csv = with_suffix(stem, ".csv");
    out.residual_max = result.meta.value("residual_max", 0.0);
    out.wall_seconds = wall;
    write_text_file(out.csv, spectrum_csv(result));
    if (config.output.metadata) {
        nlohmann::json meta = {{"config", config.to_json()},
                               {"version", std::string(library_version())},
                               {"residual_max", out.residual_max},
                               {"solves", result.meta.value("solves", 0)},
                               {"wall_time_s", wall},
                               {"csv", out.csv.filename().string()}};
        out.meta = with_suffix(stem, ".meta.json");
        write_text_file(out.meta, meta.dump(2) + "\n");
    }
    return out;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kSolverError;
    } catch (const std::length_error& e) {
        err << "problem too large: " << e.what() << '\n';
        return kSolverError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kSolverError;
    }
}

void report(std::ostream& out, const RunOutcome& r) {
    char line[160];
    std::snprintf(line, sizeof line, "wrote %s (residual max %.2e, %.2f s)", r.csv.string().c_str(), r.residual_max,
                  r.wall_seconds);
    out << line;
    if (!r.meta.empty()) out << ", metadata " << r.meta.string();
    out << '\n';
}

}  // namespace

RunOutcome run_spectrum(const RunConfig& config, const RunOptions& options) {
    if (config.sweep.axis) throw ConfigError("'spectrum' takes no sweep axis; use 'sweep'", "sweep.axis");
    return run(config, options);
}

RunOutcome run_sweep(const RunConfig& config, const RunOptions& options) {
    if (!config.sweep.axis) throw ConfigError("'sweep' needs sweep.axis (gamma, g or V)", "sweep.axis");
    return run(config, options);
}

int cmd_spectrum(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        report(out, run_spectrum(config, options));
        return int(kOk);
    });
}

int cmd_sweep(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        report(out, run_sweep(config, options));
        return int(kOk);
    });
}

int cmd_analytic(const AnalyticRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ModeTable t = analytic_modes(request.geometry, request.n, request.v, request.theta);
        const bool ring = request.geometry == Geometry::Ring;
        out << to_string(t.geometry) << " N=" << t.n << " V=" << format_number(t.coupling)
            << " theta=" << format_number(t.angle) << '\n';
        char line[160];
        std::snprintf(line, sizeof line, "%3s  %24s  %24s%s\n", "j", "omega_j", "f_j (eigenvectors)",
                      ring ? "  f_j as (N-1)^2/N delta_jN" : "");
        out << line;
        for (const auto& e : t.entries) {
            std::snprintf(line, sizeof line, "%3d  %24s  %24s", e.j, format_number(e.omega).c_str(),
                          format_number(e.strength).c_str());
            out << line;
            if (ring) out << "  " << format_number(e.closed_form);
            out << '\n';
        }
        out << "sum f_j = " << format_number(t.total_strength()) << '\n';
        if (request.csv) {
            write_text_file(*request.csv, mode_table_csv(t));
            out << "wrote " << request.csv->string() << '\n';
        }
        return int(kOk);
    });
}

int cmd_validate(const ValidateRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ValidationOptions o = request.options;
        o.on_result = [&out](const CriterionResult& r) { out << format_result_line(r) << std::endl; };
        out << "profile: " << to_string(o.profile) << '\n';
        const ValidationReport rep = run_validation(o);
        std::size_t passed = 0;
        for (const auto& r : rep.results) passed += r.passed;
        out << passed << "/" << rep.results.size() << " criteria passed\n";
        if (request.report_json) {
            write_text_file(*request.report_json,
                            nlohmann::json{{"profile", std::string(to_string(o.profile))},
                                           {"version", std::string(library_version())},
                                           {"results", rep.to_json()}}
                                    .dump(2) +
                                "\n");
        }
        if (request.figures_dir) {
            for (const auto& p : write_figure_grids(*request.figures_dir, o.workers, request.figure_filter))
                out << "wrote " << p.string() << '\n';
        }
        return rep.all_passed() ? int(kOk) : int(kValidationFailed);
    });
}

}  // namespace hopspec::cli

#include "commands.hpp"

#include "hopspec/io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace hopspec;
using namespace hopspec::cli;

struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output;
    int threads{0};
    bool print_config{false};
};

void add_config_options(CLI::App* cmd, ConfigArgs& a) {
    cmd->add_option("-c,--config", a.config_path, "YAML or JSON run configuration (a .meta.json sidecar works)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", a.overrides, "Override one entry, e.g. --set bath.gamma=0.5")->take_all();
    cmd->add_option("-o,--output", a.output, "Output stem; writes <stem>.csv and <stem>.meta.json");
    cmd->add_option("-j,--threads", a.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--print-config", a.print_config, "Print the effective configuration and exit");
}

RunConfig resolve(const ConfigArgs& a) {
    RunConfig c = a.config_path.empty() ? RunConfig{} : load_config(a.config_path);
    for (const auto& o : a.overrides) apply_override(c, o);
    return c;
}

int run_config_command(const ConfigArgs& a, bool sweep) {
    RunConfig config;
    try {
        config = resolve(a);
        if (a.print_config) {
            std::cout << config.to_text();
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    RunOptions opts;
    opts.threads = a.threads;
    if (!a.output.empty()) opts.output_stem = a.output;
    return sweep ? cmd_sweep(config, opts, std::cout, std::cerr) : cmd_spectrum(config, opts, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear absorption spectra of exciton aggregates from Laplace-domain hierarchy equations"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    ConfigArgs spectrum_args, sweep_args;
    auto* spectrum = app.add_subcommand("spectrum", "Single spectrum F(omega) -> CSV + metadata");
    add_config_options(spectrum, spectrum_args);
    auto* sweep = app.add_subcommand("sweep", "Spectra over a gamma, g or V axis -> long-format CSV + metadata");
    add_config_options(sweep, sweep_args);

    AnalyticRequest analytic_req;
    std::string geometry = "linear";
    std::string analytic_csv;
    auto* analytic = app.add_subcommand("analytic", "Closed-form mode table (j, omega_j, f_j)");
    analytic->add_option("-g,--geometry", geometry, "linear | ring");
    analytic->add_option("-N,--monomers", analytic_req.n, "Number of monomers")->required();
    analytic->add_option("-V,--coupling", analytic_req.v, "Nearest-neighbour coupling V");
    analytic->add_option("-t,--theta", analytic_req.theta, "Dipole angle theta (radians)");
    analytic->add_option("--csv", analytic_csv, "Also write the table as CSV");

    ValidateRequest validate_req;
    std::string profile = "quick";
    std::string report_json, figures_dir;
    int force_e_max = -1;
    auto* validate = app.add_subcommand("validate", "Run the acceptance matrix; nonzero exit on any failure");
    validate->add_option("-p,--profile", profile, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--only", validate_req.options.only, "Criterion ids to run (default: all)")->delimiter(',');
    validate->add_option("-j,--threads", validate_req.options.workers, "Worker threads (0 = all cores)");
    validate->add_option("--json", report_json, "Write the report as JSON");
    validate->add_option("--figures", figures_dir, "Also write 60x400 parameter-scan grids into this directory");
    validate->add_option("--figure-filter", validate_req.figure_filter, "Only grids whose name contains this text");
    validate->add_flag("--flip-decay-sign", validate_req.options.faults.flip_decay_sign,
                       "Fault injection: run the Laplace side with conjugated decay rates");
    validate->add_option("--force-e-max", force_e_max, "Fault injection: lower truncation level in the convergence check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (*spectrum) return run_config_command(spectrum_args, false);
    if (*sweep) return run_config_command(sweep_args, true);
    if (*analytic) {
        try {
            analytic_req.geometry = parse_geometry(geometry);
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kConfigError;
        }
        if (!analytic_csv.empty()) analytic_req.csv = analytic_csv;
        return cmd_analytic(analytic_req, std::cout, std::cerr);
    }
    if (*validate) {
        validate_req.options.profile = parse_profile(profile);
        if (force_e_max >= 0) validate_req.options.faults.forced_e_max = force_e_max;
        if (!report_json.empty()) validate_req.report_json = report_json;
        if (!figures_dir.empty()) validate_req.figures_dir = figures_dir;
        return cmd_validate(validate_req, std::cout, std::cerr);
    }
    return kConfigError;
}

#include "config.hpp"

#include "hopspec/io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hopspec::cli {

namespace {

std::string_view scaling_name(HierarchyScaling s) { return s == HierarchyScaling::Literal ? "literal" : "normalized"; }

struct Field {
    std::string key;  // "section.name"
    int line{0};
};

[[noreturn]] void fail(const Field& f, const std::string& what) {
    std::string where = f.line > 0 ? " (line " + std::to_string(f.line) + ")" : "";
    throw ConfigError("config key '" + f.key + "': " + what + where, f.key, f.line);
}

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

template <class T>
T scalar(const YAML::Node& node, const Field& f, const char* expected) {
    if (!node.IsScalar()) fail(f, std::string("expected ") + expected);
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(f, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
    }
}

double real(const YAML::Node& node, const Field& f) {
    const double x = scalar<double>(node, f, "a number");
    if (!std::isfinite(x)) fail(f, "must be finite");
    return x;
}

std::vector<double> real_list(const YAML::Node& node, const Field& f) {
    if (node.IsNull()) return {};
    if (!node.IsSequence()) fail(f, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(real(item, f));
    return out;
}

std::string text(const YAML::Node& node, const Field& f) { return scalar<std::string>(node, f, "a string"); }

template <class Parse>
auto parsed(const YAML::Node& node, const Field& f, Parse&& parse) {
    const std::string s = text(node, f);
    try {
        return parse(s);
    } catch (const std::invalid_argument& e) {
        fail(f, e.what());
    }
}

std::vector<TermConfig> term_list(const YAML::Node& node, const Field& f) {
    if (node.IsNull()) return {};
    if (!node.IsSequence()) fail(f, "expected a list of {g, gamma, omega} entries");
    std::vector<TermConfig> out;
    for (const auto& item : node) {
        TermConfig t;
        if (item.IsSequence()) {
            if (item.size() != 3) fail(f, "each term needs exactly [g, gamma, omega]");
            t = {real(item[0], f), real(item[1], f), real(item[2], f)};
        } else if (item.IsMap()) {
            for (const auto& kv : item) {
                const std::string k = kv.first.as<std::string>();
                const Field sub{f.key + "." + k, line_of(kv.first)};
                if (k == "g") t.g = real(kv.second, sub);
                else if (k == "gamma") t.gamma = real(kv.second, sub);
                else if (k == "omega") t.omega = real(kv.second, sub);
                else fail(sub, "unknown key");
            }
        } else {
            fail(f, "each term must be [g, gamma, omega] or a map");
        }
        out.push_back(t);
    }
    return out;
}

void set_field(RunConfig& c, const std::string& section, const std::string& key, const YAML::Node& v, int line) {
    const Field f{section + "." + key, line};
    if (section == "model") {
        if (key == "N") c.model.N = scalar<int>(v, f, "an integer");
        else if (key == "geometry") c.model.geometry = parsed(v, f, parse_geometry);
        else if (key == "V") c.model.V = real(v, f);
        else if (key == "theta") c.model.theta = real(v, f);
        else if (key == "site_energies") c.model.site_energies = real_list(v, f);
        else if (key == "dipoles") c.model.dipoles = real_list(v, f);
        else fail(f, "unknown key");
    } else if (section == "bath") {
        if (key == "g") c.bath.g = real(v, f);
        else if (key == "gamma") c.bath.gamma = real(v, f);
        else if (key == "omega") c.bath.omega = real(v, f);
        else if (key == "terms") c.bath.terms = term_list(v, f);
        else fail(f, "unknown key");
    } else if (section == "numerics") {
        auto& n = c.numerics;
        if (key == "e_max") n.e_max = scalar<int>(v, f, "an integer");
        else if (key == "epsilon") n.epsilon = real(v, f);
        else if (key == "omega_min") n.omega_min = real(v, f);
        else if (key == "omega_max") n.omega_max = real(v, f);
        else if (key == "omega_points") n.omega_points = scalar<int>(v, f, "an integer");
        else if (key == "solver") n.solver = parsed(v, f, parse_solver_strategy);
        else if (key == "tolerance") n.tolerance = real(v, f);
        else if (key == "direct_threshold") n.direct_threshold = scalar<long long>(v, f, "an integer");
        else if (key == "max_iterations") n.max_iterations = scalar<int>(v, f, "an integer");
        else if (key == "scaling") {
            const std::string s = text(v, f);
            if (s == "normalized") n.scaling = HierarchyScaling::Normalized;
            else if (s == "literal") n.scaling = HierarchyScaling::Literal;
            else fail(f, "expected normalized or literal, got '" + s + "'");
        } else if (key == "unknown_cap") n.unknown_cap = scalar<long long>(v, f, "an integer");
        else fail(f, "unknown key");
    } else if (section == "sweep") {
        auto& s = c.sweep;
        if (key == "axis") {
            if (v.IsNull()) s.axis.reset();
            else s.axis = parsed(v, f, parse_axis_name);
        } else if (key == "values") s.values = real_list(v, f);
        else if (key == "min") s.min = v.IsNull() ? std::nullopt : std::optional<double>(real(v, f));
        else if (key == "max") s.max = v.IsNull() ? std::nullopt : std::optional<double>(real(v, f));
        else if (key == "count") s.count = scalar<int>(v, f, "an integer");
        else if (key == "spacing") s.spacing = text(v, f);
        else fail(f, "unknown key");
    } else if (section == "output") {
        if (key == "stem") c.output.stem = text(v, f);
        else if (key == "metadata") c.output.metadata = scalar<bool>(v, f, "true or false");
        else fail(f, "unknown key");
    } else {
        throw ConfigError("unknown config section '" + section + "'" +
                              (line > 0 ? " (line " + std::to_string(line) + ")" : ""),
                          section, line);
    }
}

std::string list_text(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_number(xs[i]);
    return s + "]";
}

}  // namespace

void RunConfig::validate() const {
    auto bad = [](const std::string& key, const std::string& what) { throw ConfigError("config key '" + key + "': " + what, key); };
    if (model.N < 1) bad("model.N", "must be >= 1");
    if (model.geometry == Geometry::Ring && model.N < 3) bad("model.geometry", "a ring needs N >= 3");
    if (!model.site_energies.empty() && static_cast<int>(model.site_energies.size()) != model.N)
        bad("model.site_energies", "needs N entries");
    if (!model.dipoles.empty() && static_cast<int>(model.dipoles.size()) != model.N) bad("model.dipoles", "needs N entries");
    auto check_term = [&](const std::string& prefix, double g, double gamma) {
        if (g < 0.0) bad(prefix + "g", "must be >= 0");
        if (gamma < 0.0) bad(prefix + "gamma", "must be >= 0");
    };
    if (bath.terms.empty()) check_term("bath.", bath.g, bath.gamma);
    for (const auto& t : bath.terms) check_term("bath.terms.", t.g, t.gamma);
    if (numerics.e_max < 0) bad("numerics.e_max", "must be >= 0");
    if (!(numerics.epsilon > 0.0)) bad("numerics.epsilon", "must be > 0");
    if (numerics.omega_points < 1) bad("numerics.omega_points", "must be >= 1");
    if (numerics.omega_points > 1 && !(numerics.omega_max > numerics.omega_min))
        bad("numerics.omega_max", "must exceed omega_min");
    if (!(numerics.tolerance > 0.0)) bad("numerics.tolerance", "must be > 0");
    if (numerics.direct_threshold < 0) bad("numerics.direct_threshold", "must be >= 0");
    if (numerics.max_iterations < 1) bad("numerics.max_iterations", "must be >= 1");
    if (numerics.unknown_cap < 1) bad("numerics.unknown_cap", "must be >= 1");
    if (sweep.axis) {
        const bool ranged = sweep.min || sweep.max || sweep.count > 0;
        if (!sweep.values.empty() && ranged) bad("sweep.values", "give either values or min/max/count, not both");
        if (sweep.values.empty() && !ranged) bad("sweep.values", "the sweep axis has no values");
        if (ranged) {
            if (!sweep.min || !sweep.max) bad("sweep.min", "a range needs both min and max");
            if (sweep.count < 1) bad("sweep.count", "must be >= 1");
            if (sweep.spacing != "linear" && sweep.spacing != "log") bad("sweep.spacing", "expected linear or log");
            if (sweep.spacing == "log" && !(*sweep.min > 0.0 && *sweep.max > 0.0)) bad("sweep.min", "log spacing needs positive bounds");
            if (sweep.count > 1 && !(*sweep.max > *sweep.min)) bad("sweep.max", "must exceed min");
        }
    } else if (!sweep.values.empty() || sweep.count > 0) {
        bad("sweep.axis", "sweep values given without an axis");
    }
    if (output.stem.empty()) bad("output.stem", "must not be empty");
    try {
        to_model().validate();
        to_plan(1).validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

Model RunConfig::to_model() const {
    Model m;
    m.aggregate.n_monomers = model.N;
    m.aggregate.geometry = model.geometry;
    m.aggregate.coupling = model.V;
    m.aggregate.angle = model.theta;
    m.aggregate.site_energies = model.site_energies;
    m.aggregate.dipole_magnitudes = model.dipoles;
    std::vector<BathTerm> terms;
    if (bath.terms.empty()) {
        terms.push_back(BathTerm::lorentzian(bath.g, bath.gamma, bath.omega));
    } else {
        for (const auto& t : bath.terms) terms.push_back(BathTerm::lorentzian(t.g, t.gamma, t.omega));
    }
    m.bath = BathSpec::shared(model.N, std::move(terms));
    return m;
}

std::vector<double> RunConfig::omega_grid() const {
    return linear_grid(numerics.omega_min, numerics.omega_max, numerics.omega_points);
}

std::optional<ParameterAxis> RunConfig::axis() const {
    if (!sweep.axis) return std::nullopt;
    ParameterAxis a{*sweep.axis, sweep.values};
    if (a.values.empty()) {
        a.values = sweep.spacing == "log" ? log_grid(*sweep.min, *sweep.max, sweep.count)
                                          : linear_grid(*sweep.min, *sweep.max, sweep.count);
    }
    return a;
}

SweepPlan RunConfig::to_plan(int workers) const {
    SweepPlan p;
    p.omega_grid = omega_grid();
    p.epsilon = numerics.epsilon;
    p.parameter_axis = axis();
    p.e_max = numerics.e_max;
    p.workers = workers;
    p.solver.strategy = numerics.solver;
    p.solver.tolerance = numerics.tolerance;
    p.solver.direct_threshold = static_cast<Eigen::Index>(numerics.direct_threshold);
    p.solver.max_iterations = numerics.max_iterations;
    p.scaling = numerics.scaling;
    p.unknown_cap = static_cast<std::size_t>(numerics.unknown_cap);
    return p;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : bath.terms) terms.push_back({{"g", t.g}, {"gamma", t.gamma}, {"omega", t.omega}});
    nlohmann::json sw = {{"axis", sweep.axis ? nlohmann::json(std::string(to_string(*sweep.axis))) : nlohmann::json()},
                         {"values", sweep.values},
                         {"count", sweep.count},
                         {"spacing", sweep.spacing}};
    sw["min"] = sweep.min ? nlohmann::json(*sweep.min) : nlohmann::json();
    sw["max"] = sweep.max ? nlohmann::json(*sweep.max) : nlohmann::json();
    return {{"model",
             {{"N", model.N},
              {"geometry", std::string(to_string(model.geometry))},
              {"V", model.V},
              {"theta", model.theta},
              {"site_energies", model.site_energies},
              {"dipoles", model.dipoles}}},
            {"bath", {{"g", bath.g}, {"gamma", bath.gamma}, {"omega", bath.omega}, {"terms", terms}}},
            {"numerics",
             {{"e_max", numerics.e_max},
              {"epsilon", numerics.epsilon},
              {"omega_min", numerics.omega_min},
              {"omega_max", numerics.omega_max},
              {"omega_points", numerics.omega_points},
              {"solver", std::string(to_string(numerics.solver))},
              {"tolerance", numerics.tolerance},
              {"direct_threshold", numerics.direct_threshold},
              {"max_iterations", numerics.max_iterations},
              {"scaling", std::string(scaling_name(numerics.scaling))},
              {"unknown_cap", numerics.unknown_cap}}},
            {"sweep", sw},
            {"output", {{"stem", output.stem}, {"metadata", output.metadata}}}};
}

std::string RunConfig::to_text() const {
    std::ostringstream o;
    auto num = [](double x) { return format_number(x); };
    auto entry = [&o](const std::string& key, const std::string& value, const char* note = "") {
        std::string line = "  " + key + ": " + value;
        if (*note) {
            line.resize(std::max<std::size_t>(line.size() + 1, 30), ' ');
            line += "# ";
            line += note;
        }
        o << line << '\n';
    };
    std::string terms = "[";
    for (std::size_t i = 0; i < bath.terms.size(); ++i) {
        terms += (i ? ", [" : "[") + num(bath.terms[i].g) + ", " + num(bath.terms[i].gamma) + ", " +
                 num(bath.terms[i].omega) + "]";
    }
    terms += "]";

    o << "model:\n";
    entry("N", std::to_string(model.N), "monomers");
    entry("geometry", std::string(to_string(model.geometry)), "linear | ring (ring needs N >= 3)");
    entry("V", num(model.V), "nearest-neighbour coupling, units of Omega");
    entry("theta", num(model.theta), "dipole angle (radians), enters as V cos(theta)");
    entry("site_energies", list_text(model.site_energies), "empty: all zero");
    entry("dipoles", list_text(model.dipoles), "empty: all one");
    o << "bath:\n";
    entry("g", num(bath.g), "coupling strength, alpha(0) = g");
    entry("gamma", num(bath.gamma), "damping rate");
    entry("omega", num(bath.omega), "mode frequency");
    entry("terms", terms, "[g, gamma, omega] list; replaces the single term");
    o << "numerics:\n";
    entry("e_max", std::to_string(numerics.e_max), "hierarchy depth");
    entry("epsilon", num(numerics.epsilon), "Laplace broadening");
    entry("omega_min", num(numerics.omega_min));
    entry("omega_max", num(numerics.omega_max));
    entry("omega_points", std::to_string(numerics.omega_points));
    entry("solver", std::string(to_string(numerics.solver)), "auto | direct | iterative");
    entry("tolerance", num(numerics.tolerance), "relative residual per solve");
    entry("direct_threshold", std::to_string(numerics.direct_threshold), "auto: unknowns above this go iterative");
    entry("max_iterations", std::to_string(numerics.max_iterations), "iterative solver only");
    entry("scaling", std::string(scaling_name(numerics.scaling)), "normalized | literal");
    entry("unknown_cap", std::to_string(numerics.unknown_cap), "refuse larger hierarchies");
    o << "sweep:\n";
    entry("axis", sweep.axis ? std::string(to_string(*sweep.axis)) : "null", "gamma | g | V; null for a single spectrum");
    entry("values", list_text(sweep.values), "explicit axis values, or use min/max/count");
    entry("min", sweep.min ? num(*sweep.min) : "null");
    entry("max", sweep.max ? num(*sweep.max) : "null");
    entry("count", std::to_string(sweep.count));
    entry("spacing", sweep.spacing, "linear | log");
    o << "output:\n";
    entry("stem", output.stem, "writes <stem>.csv and <stem>.meta.json");
    entry("metadata", output.metadata ? "true" : "false");
    return o.str();
}

RunConfig parse_config(std::string_view text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source + ": syntax error: " + e.msg, "", e.mark.line + 1);
    }
    RunConfig c;
    if (root.IsNull()) return c;
    if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping of sections");
    // A metadata sidecar carries the configuration under "config"; the rest is output.
    if (root["config"] && root["config"].IsMap()) root = root["config"];
    for (const auto& section : root) {
        const std::string name = section.first.as<std::string>();
        if (section.second.IsNull()) continue;
        if (!section.second.IsMap()) {
            throw ConfigError(source + ": section '" + name + "' must be a mapping", name, line_of(section.first));
        }
        for (const auto& kv : section.second) {
            set_field(c, name, kv.first.as<std::string>(), kv.second, line_of(kv.first));
        }
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str(), path.string());
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form section.key=value",
                          std::string(assignment));
    }
    const std::string section(assignment.substr(0, dot));
    const std::string key(assignment.substr(dot + 1, eq - dot - 1));
    YAML::Node value;
    try {
        value = YAML::Load(std::string(assignment.substr(eq + 1)));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("override '" + std::string(assignment) + "': " + e.msg, section + "." + key);
    }
    set_field(config, section, key, value, 0);
}

}  // namespace hopspec::cli

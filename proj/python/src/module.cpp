#include "hopspec/errors.hpp"
#include "hopspec/io.hpp"
#include "hopspec/oracle.hpp"
#include "hopspec/spectrum.hpp"
#include "hopspec/validation.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hopspec;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Model make_model(int n, const std::string& geometry, double v, double theta, double g, double gamma,
                 double omega_vib) {
    Model m;
    m.aggregate.n_monomers = n;
    m.aggregate.geometry = parse_geometry(geometry);
    m.aggregate.coupling = v;
    m.aggregate.angle = theta;
    m.bath = BathSpec::lorentzian(n, g, gamma, omega_vib);
    m.validate();
    return m;
}

std::vector<double> grid_or_default(const std::optional<Array>& omega) {
    if (!omega) return linear_grid(-4.0, 6.0, 2001);
    if (omega->ndim() != 1) throw std::invalid_argument("omega must be a 1-D array");
    return {omega->data(), omega->data() + omega->size()};
}

Array to_array(const std::vector<double>& v) {
    Array a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

SweepPlan make_plan(std::vector<double> grid, double epsilon, int e_max, int workers) {
    SweepPlan p;
    p.omega_grid = std::move(grid);
    p.epsilon = epsilon;
    p.e_max = e_max;
    p.workers = workers;
    return p;
}

py::tuple spectrum(int n, const std::string& geometry, double v, double theta, double g, double gamma,
                   double omega_vib, int e_max, double epsilon, const std::optional<Array>& omega, int workers) {
    Model m = make_model(n, geometry, v, theta, g, gamma, omega_vib);
    SweepPlan p = make_plan(grid_or_default(omega), epsilon, e_max, workers);
    SpectrumResult r;
    {
        py::gil_scoped_release release;
        r = compute_spectrum(m, p);
    }
    return py::make_tuple(to_array(r.omega), to_array(r.f));
}

py::tuple sweep(const std::string& axis, const std::vector<double>& values, int n, const std::string& geometry,
                double v, double theta, double g, double gamma, double omega_vib, int e_max, double epsilon,
                const std::optional<Array>& omega, int workers) {
    Model m = make_model(n, geometry, v, theta, g, gamma, omega_vib);
    SweepPlan p = make_plan(grid_or_default(omega), epsilon, e_max, workers);
    p.parameter_axis = ParameterAxis{parse_axis_name(axis), values};
    SpectrumResult r;
    {
        py::gil_scoped_release release;
        r = compute_spectrum(m, p);
    }
    Array f({static_cast<py::ssize_t>(r.rows()), static_cast<py::ssize_t>(r.omega.size())});
    std::copy(r.f.begin(), r.f.end(), f.mutable_data());
    return py::make_tuple(to_array(r.axis_values), to_array(r.omega), f);
}

py::list modes(const std::string& geometry, int n, double v, double theta) {
    py::list out;
    for (const auto& e : analytic_modes(parse_geometry(geometry), n, v, theta).entries) {
        py::dict d;
        d["j"] = e.j;
        d["omega"] = e.omega;
        d["f"] = e.strength;
        d["f_closed_form"] = e.closed_form;
        out.append(d);
    }
    return out;
}

py::tuple sticks_tuple(const StickSpectrum& s) {
    std::vector<double> w, p;
    for (const auto& st : s.sticks) {
        w.push_back(st.omega);
        p.push_back(st.weight);
    }
    return py::make_tuple(to_array(w), to_array(p));
}

py::tuple dense_vibronic(int n, const std::string& geometry, double v, double theta, double g, double omega_vib,
                         int n_max, double epsilon, const std::optional<Array>& omega) {
    AggregateSpec a;
    a.n_monomers = n;
    a.geometry = parse_geometry(geometry);
    a.coupling = v;
    a.angle = theta;
    auto grid = grid_or_default(omega);
    SpectrumResult r;
    {
        py::gil_scoped_release release;
        r = dense_vibronic_spectrum(a, g, omega_vib, n_max, epsilon, grid);
    }
    return py::make_tuple(to_array(r.omega), to_array(r.f));
}

py::list peaks(const Array& omega, const Array& f, double rel_threshold, double min_separation) {
    if (omega.ndim() != 1 || f.ndim() != 1) throw std::invalid_argument("omega and F must be 1-D");
    std::span<const double> w(omega.data(), static_cast<std::size_t>(omega.size()));
    std::span<const double> y(f.data(), static_cast<std::size_t>(f.size()));
    py::list out;
    for (const auto& p : find_peaks(w, y, rel_threshold, min_separation).peaks)
        out.append(py::make_tuple(p.omega, p.height));
    return out;
}

py::list validate(const std::string& profile, const std::vector<int>& only, int workers) {
    ValidationOptions o;
    o.profile = parse_profile(profile);
    o.only = only;
    o.workers = workers;
    ValidationReport rep;
    {
        py::gil_scoped_release release;
        rep = run_validation(o);
    }
    return py::module_::import("json").attr("loads")(rep.to_json().dump());
}

}  // namespace

PYBIND11_MODULE(_hopspec, m) {
    m.doc() = "Linear absorption spectra of exciton aggregates from Laplace-domain hierarchy equations";
    m.attr("__version__") = std::string(library_version());

    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("spectrum", &spectrum, py::arg("n") = 1, py::arg("geometry") = "linear", py::arg("V") = 1.0,
          py::arg("theta") = 0.0, py::arg("g") = 1.0, py::arg("gamma") = 1.0, py::arg("omega_vib") = 1.0,
          py::arg("e_max") = 12, py::arg("epsilon") = 0.01, py::arg("omega") = py::none(), py::arg("workers") = 0,
          "F(omega) for one aggregate. Returns (omega, F).");
    m.def("sweep", &sweep, py::arg("axis"), py::arg("values"), py::arg("n") = 1, py::arg("geometry") = "linear",
          py::arg("V") = 1.0, py::arg("theta") = 0.0, py::arg("g") = 1.0, py::arg("gamma") = 1.0,
          py::arg("omega_vib") = 1.0, py::arg("e_max") = 12, py::arg("epsilon") = 0.01,
          py::arg("omega") = py::none(), py::arg("workers") = 0,
          "Spectra over a gamma, g or V axis. Returns (values, omega, F[len(values), len(omega)]).");
    m.def("analytic_modes", &modes, py::arg("geometry"), py::arg("n"), py::arg("V") = 1.0, py::arg("theta") = 0.0,
          "Closed-form exciton modes as a list of dicts (j, omega, f, f_closed_form).");
    m.def(
        "franck_condon",
        [](double g, double omega_vib, int n_max) { return sticks_tuple(franck_condon_monomer(g, omega_vib, n_max)); },
        py::arg("g"), py::arg("omega_vib") = 1.0, py::arg("n_max") = kDefaultFockCutoff,
        "Monomer stick spectrum with one undamped mode. Returns (positions, weights).");
    m.def("dense_vibronic", &dense_vibronic, py::arg("n"), py::arg("geometry") = "linear", py::arg("V") = 1.0,
          py::arg("theta") = 0.0, py::arg("g") = 1.0, py::arg("omega_vib") = 1.0, py::arg("n_max") = 12,
          py::arg("epsilon") = 0.01, py::arg("omega") = py::none(),
          "Exact undamped spectrum by dense diagonalization. Returns (omega, F).");
    m.def("find_peaks", &peaks, py::arg("omega"), py::arg("F"), py::arg("rel_threshold") = kDefaultPeakThreshold,
          py::arg("min_separation") = 0.02, "List of (omega, height) for local maxima.");
    m.def("validate", &validate, py::arg("profile") = "quick", py::arg("only") = std::vector<int>{},
          py::arg("workers") = 0, "Run the acceptance matrix; returns one dict per criterion.");
}

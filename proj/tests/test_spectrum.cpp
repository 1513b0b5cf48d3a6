#include <doctest.h>

#include "hopspec/oracle.hpp"
#include "hopspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace hopspec;

namespace {

Model aggregate_model(int n, Geometry geo, double v, double g, double gamma) {
    Model m;
    m.aggregate.n_monomers = n;
    m.aggregate.geometry = geo;
    m.aggregate.coupling = v;
    m.bath = BathSpec::lorentzian(n, g, gamma, 1.0);
    return m;
}

SpectrumResult run(const Model& m, std::vector<double> grid, int e_max, double eps = 0.01) {
    SweepPlan p;
    p.omega_grid = std::move(grid);
    p.epsilon = eps;
    p.e_max = e_max;
    p.workers = 1;
    return compute_spectrum(m, p);
}

double max_of(std::span<const double> f) { return *std::max_element(f.begin(), f.end()); }

std::vector<double> lorentzian_pair(double a, double b, double wa, double wb, double eps,
                                    const std::vector<double>& grid) {
    std::vector<double> f;
    for (double w : grid)
        f.push_back(wa * eps / (eps * eps + (w - a) * (w - a)) + wb * eps / (eps * eps + (w - b) * (w - b)));
    return f;
}

}  // namespace

TEST_CASE("absorption of a diagonal block") {
    CorrelationBlock b;
    b.c_tilde = Eigen::MatrixXcd::Zero(2, 2);
    b.c_tilde << cplx{1.0, 5.0}, cplx{0.5, -1.0}, cplx{0.25, 0.0}, cplx{2.0, 3.0};
    const std::vector<double> mu{1.0, 1.0};
    CHECK(absorption(b, mu) == doctest::Approx(3.75));
    const std::vector<double> mu2{2.0, 0.0};
    CHECK(absorption(b, mu2) == doctest::Approx(4.0));
    const std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(absorption(b, wrong), std::invalid_argument);
}

TEST_CASE("bare monomer is a lorentzian of height 1/eps") {
    auto grid = linear_grid(-1.0, 1.0, 201);
    auto r = run(aggregate_model(1, Geometry::Linear, 0.0, 0.0, 1.0), grid, 4);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(r.f[i] == doctest::Approx(0.01 / (1e-4 + grid[i] * grid[i])).epsilon(1e-12));
    CHECK(r.f[100] == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("bare dimer matches the two-lorentzian mixture") {
    auto grid = linear_grid(-4.0, 6.0, 2001);
    auto r = run(aggregate_model(2, Geometry::Linear, 1.0, 0.0, 1.0), grid, 12);
    auto modes = chain_modes(2, 1.0, 0.0);
    auto ref = lorentzian_pair(modes.entries[0].omega, modes.entries[1].omega, modes.entries[0].strength,
                               modes.entries[1].strength, 0.01, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(r.f[i] - ref[i]));
    CHECK(worst <= 1e-8 * max_of(ref));

    auto peaks = find_peaks(r, kDefaultPeakThreshold, 0.02);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks.dominant().omega == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(peaks.dominant().height == doctest::Approx(200.0).epsilon(1e-6));
}

TEST_CASE("bare limit for larger aggregates") {
    auto grid = linear_grid(-4.0, 6.0, 1001);
    for (auto [n, geo] : {std::pair{3, Geometry::Linear}, std::pair{4, Geometry::Ring}, std::pair{4, Geometry::Linear}}) {
        auto r = run(aggregate_model(n, geo, 1.0, 0.0, 1.0), grid, 3);
        auto modes = analytic_modes(geo, n, 1.0, 0.0);
        double fmax = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double ref = 0.0;
            for (const auto& e : modes.entries)
                ref += e.strength * 0.01 / (1e-4 + (grid[i] - e.omega) * (grid[i] - e.omega));
            fmax = std::max(fmax, ref);
            worst = std::max(worst, std::abs(r.f[i] - ref));
        }
        CHECK(worst <= 1e-8 * fmax);
    }
}

TEST_CASE("integrated intensity equals pi times the dipole sum") {
    // eps = 0.05, step eps/2
    auto grid = linear_grid(-12.0, 14.0, 1041);
    struct Case {
        int n;
        Geometry geo;
        double g, gamma;
    };
    for (auto c : {Case{1, Geometry::Linear, 1.0, 1.0}, Case{1, Geometry::Linear, 3.0, 0.05},
                   Case{1, Geometry::Linear, 0.0, 5.0}, Case{2, Geometry::Linear, 1.0, 0.05},
                   Case{2, Geometry::Linear, 1.0, 5.0}, Case{3, Geometry::Ring, 1.0, 1.0}}) {
        CAPTURE(c.n);
        CAPTURE(c.g);
        CAPTURE(c.gamma);
        auto r = run(aggregate_model(c.n, c.geo, 1.0, c.g, c.gamma), grid, c.n == 1 ? 16 : 8, 0.05);
        auto rep = integrated_intensity(r);
        CHECK(rep.integral == doctest::Approx(std::numbers::pi * c.n).epsilon(0.01));
        CHECK(*std::min_element(r.f.begin(), r.f.end()) >= -1e-6 * max_of(r.f));
    }
}

TEST_CASE("trapezoid and boundary ratio") {
    std::vector<double> w{0.0, 1.0, 2.0, 3.0};
    std::vector<double> f{0.0, 2.0, 2.0, 0.0};
    auto rep = integrated_intensity(w, f);
    CHECK(rep.integral == 4.0);
    CHECK(rep.boundary_ok);
    f.back() = 1.0;
    CHECK_FALSE(integrated_intensity(w, f).boundary_ok);
    CHECK_THROWS_AS(integrated_intensity(std::vector<double>{0.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("undamped monomer shows the vibronic progression") {
    auto grid = linear_grid(-2.0, 4.0, 1201);
    auto r = run(aggregate_model(1, Geometry::Linear, 0.0, 1.0, 0.0), grid, 12);
    auto peaks = find_peaks(r, kDefaultPeakThreshold, 0.02);
    REQUIRE(peaks.size() >= 5);
    for (int i = 0; i < 5; ++i) CHECK(peaks.peaks[static_cast<std::size_t>(i)].omega == doctest::Approx(i - 1.0).epsilon(1e-3));
    // e^-1 {1, 1, 1/2, 1/6, 1/24}
    CHECK(peaks.peaks[0].height == doctest::Approx(peaks.peaks[1].height).epsilon(1e-3));
    CHECK(peaks.peaks[2].height < peaks.peaks[1].height);
    CHECK(peaks.peaks[3].height < peaks.peaks[2].height);
    CHECK(peaks.peaks[4].height < peaks.peaks[3].height);
}

TEST_CASE("strong damping narrows towards the bright exciton") {
    auto grid = linear_grid(-4.0, 6.0, 1001);
    auto r = run(aggregate_model(2, Geometry::Linear, 1.0, 1.0, 50.0), grid, 6);
    auto peaks = find_peaks(r, kDefaultPeakThreshold, 0.02);
    const auto it = std::max_element(r.f.begin(), r.f.end());
    CHECK(std::abs(grid[static_cast<std::size_t>(it - r.f.begin())] - 1.0) <= 0.01);
    CHECK(peaks.size() == 1);

    auto dimer5 = run(aggregate_model(2, Geometry::Linear, 1.0, 1.0, 5.0), grid, 8);
    CHECK(std::abs(find_peaks(dimer5, kDefaultPeakThreshold, 0.02).dominant().omega - 1.0) < 0.15);
}

TEST_CASE("linear trimer at gamma 5 has a weak second peak") {
    auto grid = linear_grid(-4.0, 6.0, 1001);
    auto r = run(aggregate_model(3, Geometry::Linear, 1.0, 1.0, 5.0), grid, 6);
    auto peaks = find_peaks(r, kDefaultPeakThreshold, 0.02);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks.peaks[0].omega + std::sqrt(2.0)) < 0.15);
    CHECK(std::abs(peaks.peaks[1].omega - std::sqrt(2.0)) < 0.15);
    CHECK(peaks.peaks[0].height < 0.1 * peaks.peaks[1].height);
}

TEST_CASE("peak merge and threshold") {
    auto grid = linear_grid(-1.0, 1.0, 2001);
    auto close = lorentzian_pair(-0.004, 0.004, 1.0, 0.8, 0.001, grid);
    CHECK(find_peaks(grid, close, 1e-3, 0.02).size() == 1);
    CHECK(find_peaks(grid, close, 1e-3, 0.02).dominant().omega == doctest::Approx(-0.004).epsilon(1e-3));
    CHECK(find_peaks(grid, close, 1e-3, 0.002).size() == 2);

    auto faint = lorentzian_pair(-0.5, 0.5, 1.0, 1e-4, 0.01, grid);
    CHECK(find_peaks(grid, faint, 1e-3, 0.02).size() == 1);
    CHECK(find_peaks(grid, faint, 1e-5, 0.02).size() == 2);
}

TEST_CASE("parabolic refinement lands between grid points") {
    auto grid = linear_grid(-1.0, 1.0, 201);
    auto f = lorentzian_pair(0.123, 5.0, 1.0, 0.0, 0.05, grid);
    auto peaks = find_peaks(grid, f, 1e-3, 0.1);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks.dominant().omega - 0.123) < 2e-3);
    CHECK(peaks.dominant().prominence > 0.0);
}

TEST_CASE("peak search input checks") {
    std::vector<double> w{0.0, 1.0}, f{1.0};
    CHECK_THROWS_AS(find_peaks(w, f, 1e-3, 0.1), std::invalid_argument);
    std::vector<double> f2{1.0, 2.0};
    CHECK_THROWS_AS(find_peaks(w, f2, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(PeakList{}.dominant(), std::logic_error);
}

TEST_CASE("two-dimensional result layout") {
    auto m = aggregate_model(1, Geometry::Linear, 0.0, 1.0, 1.0);
    SweepPlan p;
    p.omega_grid = linear_grid(-1.0, 1.0, 11);
    p.e_max = 4;
    p.workers = 1;
    p.parameter_axis = ParameterAxis{AxisName::Gamma, {0.5, 2.0}};
    auto r = compute_spectrum(m, p);
    CHECK(r.rows() == 2);
    CHECK(r.axis_name == "gamma");
    CHECK(r.f.size() == 22);
    auto single = run(apply_axis(m, AxisName::Gamma, 2.0), p.omega_grid, 4);
    auto row = r.row(1);
    CHECK(std::equal(row.begin(), row.end(), single.f.begin()));
    CHECK_THROWS_AS(r.row(2), std::out_of_range);
}

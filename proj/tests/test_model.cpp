#include <doctest.h>

#include "hopspec/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace hopspec;

namespace {

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end());
    return ev;
}

AggregateSpec aggregate(int n, Geometry geo, double v, double theta = 0.0) {
    AggregateSpec a;
    a.n_monomers = n;
    a.geometry = geo;
    a.coupling = v;
    a.angle = theta;
    return a;
}

}  // namespace

TEST_CASE("dimer hamiltonian eigenvalues") {
    auto ev = sorted_eigenvalues(build_system_hamiltonian(aggregate(2, Geometry::Linear, 1.0)));
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ring of three") {
    auto ev = sorted_eigenvalues(build_system_hamiltonian(aggregate(3, Geometry::Ring, 1.0)));
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev[2] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("perpendicular dipoles decouple") {
    for (int n : {2, 3, 4}) {
        for (auto geo : {Geometry::Linear, Geometry::Ring}) {
            if (geo == Geometry::Ring && n < 3) continue;
            auto h = build_system_hamiltonian(aggregate(n, geo, 1.0, std::numbers::pi / 2));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) CHECK(h(i, j) == cplx{0.0, 0.0});
        }
    }
}

TEST_CASE("hamiltonian is hermitian with site energies on the diagonal") {
    auto a = aggregate(4, Geometry::Ring, 0.7, 0.3);
    a.site_energies = {0.1, -0.2, 0.3, 0.0};
    auto h = build_system_hamiltonian(a);
    CHECK((h - h.adjoint()).norm() == 0.0);
    CHECK(h(1, 1).real() == -0.2);
    CHECK(h(0, 3).real() == doctest::Approx(0.7 * std::cos(0.3)));
}

TEST_CASE("aggregate validation") {
    CHECK_THROWS_AS(aggregate(0, Geometry::Linear, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(aggregate(2, Geometry::Ring, 1.0).validate(), std::invalid_argument);
    auto a = aggregate(3, Geometry::Linear, 1.0);
    a.site_energies = {0.0, 1.0};
    CHECK_THROWS_AS(a.validate(), std::invalid_argument);
    a.site_energies.clear();
    a.coupling = std::nan("");
    CHECK_THROWS_AS(a.validate(), std::invalid_argument);
    CHECK_THROWS_AS(parse_geometry("triangle"), std::invalid_argument);
    CHECK(parse_geometry("Ring") == Geometry::Ring);
}

TEST_CASE("correlation at zero sums the weights") {
    CHECK(correlation_at_zero(BathSpec::lorentzian(1, 1.0, 1.0, 1.0), 0) == cplx{1.0, 0.0});
    auto two = BathSpec::shared(2, {BathTerm::lorentzian(0.5, 1.0, 1.0), BathTerm::lorentzian(0.25, 2.0, 0.5)});
    CHECK(correlation_at_zero(two, 1) == cplx{0.75, 0.0});
    CHECK(correlation_at_zero(BathSpec::lorentzian(1, 0.0, 1.0, 1.0), 0) == cplx{0.0, 0.0});
    CHECK_THROWS_AS(correlation_at_zero(two, 2), std::out_of_range);
}

TEST_CASE("spectral density of a lorentzian term") {
    auto t = BathTerm::lorentzian(1.0, 1.0, 1.0);
    CHECK(spectral_density(t, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(spectral_density(t, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spectral_density(BathTerm::lorentzian(0.0, 1.0, 1.0), 0.3) == 0.0);
    CHECK_THROWS_AS(spectral_density(BathTerm::lorentzian(1.0, 0.0, 1.0), 1.0), std::domain_error);
}

TEST_CASE("spectral density integrates to 2 pi g") {
    // tan substitution, w = Omega + gamma tan(u)
    const double g = 0.7, gamma = 0.4, omega = 1.3;
    auto t = BathTerm::lorentzian(g, gamma, omega);
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = -std::numbers::pi / 2 + (i + 0.5) * std::numbers::pi / n;
        const double c = std::cos(u);
        sum += spectral_density(t, omega + gamma * std::tan(u)) * gamma / (c * c);
    }
    sum *= std::numbers::pi / n;
    CHECK(sum == doctest::Approx(2 * std::numbers::pi * g).epsilon(1e-10));
}

TEST_CASE("decay form keeps the damping in the real part") {
    auto t = BathTerm::lorentzian(1.0, 0.3, 1.0);
    CHECK(t.gamma() == 0.3);
    CHECK(t.frequency() == 1.0);
    CHECK_THROWS_AS(BathTerm::lorentzian(1.0, -0.1, 1.0).validate(), std::invalid_argument);
}

TEST_CASE("bath flattening") {
    BathSpec b;
    b.per_monomer_terms = {{BathTerm::lorentzian(1, 1, 1)},
                           {BathTerm::lorentzian(1, 1, 1), BathTerm::lorentzian(2, 1, 1)}};
    CHECK(b.term_count() == 3);
    CHECK(b.slot_monomers() == std::vector<int>{0, 1, 1});
    CHECK_FALSE(b.is_shared());
    CHECK(BathSpec::lorentzian(3, 1, 1, 1).is_shared());

    Model m{aggregate(3, Geometry::Linear, 1.0), b};
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

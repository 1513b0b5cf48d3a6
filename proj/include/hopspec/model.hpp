// model.hpp: aggregate geometry, bath correlation terms and the single-excitation Hamiltonian

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hopspec {

using cplx = std::complex<double>;

enum class Geometry { Linear, Ring };

std::string_view to_string(Geometry g) noexcept;
Geometry parse_geometry(std::string_view text);

// N two-level monomers in the single-excitation manifold. Energies in units of Omega.
struct AggregateSpec {
    int n_monomers{1};
    Geometry geometry{Geometry::Linear};
    std::vector<double> site_energies;      // empty means all zero
    double coupling{0.0};                   // V
    double angle{0.0};                      // theta, radians; enters only through V cos(theta)
    std::vector<double> dipole_magnitudes;  // empty means all one
    bool dipole_parallel{true};

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;

    double site_energy(int n) const;
    double dipole(int n) const;
    std::vector<double> dipoles() const;
    // Nearest-neighbour coupling V cos(theta).
    double bond() const;
};

// One exponential term alpha(tau) = weight * exp(-decay * tau), tau > 0.
// Re(decay) is the damping rate gamma, Im(decay) the mode frequency Omega.
struct BathTerm {
    cplx weight{1.0, 0.0};
    cplx decay{1.0, 1.0};

    // Single Lorentzian (Ornstein-Uhlenbeck) term: decay = gamma + i*Omega.
    static BathTerm lorentzian(double g, double gamma, double omega);

    double gamma() const noexcept { return decay.real(); }
    double frequency() const noexcept { return decay.imag(); }
    void validate() const;
};

struct BathSpec {
    std::vector<std::vector<BathTerm>> per_monomer_terms;

    // All monomers carry identical, statistically independent copies of `terms`.
    static BathSpec shared(int n_monomers, std::vector<BathTerm> terms);
    static BathSpec lorentzian(int n_monomers, double g, double gamma, double omega);

    int n_monomers() const noexcept { return static_cast<int>(per_monomer_terms.size()); }
    // Flattened term count M (monomer-major, term-minor).
    int term_count() const noexcept;
    // Monomer owning flattened slot j.
    std::vector<int> slot_monomers() const;
    std::vector<BathTerm> flattened_terms() const;
    bool is_shared() const noexcept;

    void validate() const;
};

// Aggregate plus its environment; the unit every solver entry point consumes.
struct Model {
    AggregateSpec aggregate;
    BathSpec bath;

    void validate() const;
};

// H_sys: diagonal site energies and V cos(theta) on nearest-neighbour bonds (plus the wrap bond for rings).
Eigen::MatrixXcd build_system_hamiltonian(const AggregateSpec& spec);

// alpha_n(0) = sum_j g_j over the monomer's terms.
cplx correlation_at_zero(const BathSpec& bath, int monomer);

// J(omega) = 2 Re[g / (decay - i omega)] = 2 g gamma / (gamma^2 + (omega - Omega)^2) for real g.
// Throws std::domain_error for gamma == 0, where the density is a delta distribution.
double spectral_density(const BathTerm& term, double omega);

}  // namespace hopspec

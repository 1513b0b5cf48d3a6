// oracle.hpp: independent reference computations used to validate the Laplace-domain engine
//
//  * closed-form eigenmodes of open chains and rings,
//  * gamma = 0 exact spectra by dense diagonalization of the explicit vibronic Hamiltonian,
//  * the time-domain hierarchy integrated numerically and Laplace-transformed by quadrature.
//
// None of these go through the hierarchy assembler or the sparse solvers.

#pragma once

#include "hopspec/model.hpp"
#include "hopspec/spectrum.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace hopspec {

struct ModeEntry {
    int j{0};
    double omega{0.0};
    double strength{0.0};     // |sum_n c_jn|^2 from the eigenvector
    double closed_form{0.0};  // printed closed-form strength, kept for comparison
};

struct ModeTable {
    Geometry geometry{Geometry::Linear};
    int n{1};
    double coupling{0.0};
    double angle{0.0};
    std::vector<ModeEntry> entries;  // j = 1..N

    double total_strength() const;
};

// omega_j = 2 V cos(theta) cos(j pi / (N + 1)), c_jn = sqrt(2/(N+1)) sin(j n pi / (N + 1)).
ModeTable chain_modes(int n, double coupling, double angle);
// omega_j = 2 V cos(theta) cos(2 j pi / N), c_jn = exp(2 pi i j n / N) / sqrt(N); N >= 3.
// closed_form carries the printed (N-1)^2/N for j = N, which disagrees with the eigenvector value N.
ModeTable ring_modes(int n, double coupling, double angle);
ModeTable analytic_modes(Geometry geometry, int n, double coupling, double angle);

struct Stick {
    double omega{0.0};
    double weight{0.0};
};

struct StickSpectrum {
    std::vector<Stick> sticks;  // ascending omega
    double normalization{0.0};  // sum of weights
};

inline constexpr int kDefaultFockCutoff = 20;

// Poisson tail sum_{n > n_max} e^-S S^n / n!.
double poisson_tail(double huang_rhys, int n_max);

// Monomer with one undamped mode: exact diagonalization of Omega a^+a + sqrt(g)(a + a^+)
// in a Fock space truncated at n_max. Sticks at -g/Omega + n Omega, weights e^-S S^n/n!, S = g/Omega^2.
// Throws std::runtime_error when the Poisson tail beyond n_max exceeds 1e-10.
StickSpectrum franck_condon_monomer(double g, double omega_vib, int n_max = kDefaultFockCutoff);

// Lorentzian-broadened stick spectrum: sum_i w_i eps / (eps^2 + (omega - omega_i)^2).
std::vector<double> broaden(const StickSpectrum& sticks, double epsilon, const std::vector<double>& grid);

// N monomers, each with its own undamped mode, exact up to Fock truncation. Returns the
// bright sticks (weights |sum_n mu_n <E|pi_n, 0>|^2) of the explicit vibronic Hamiltonian.
// Throws std::length_error when N (n_max + 1)^N exceeds max_dimension.
StickSpectrum vibronic_sticks(const AggregateSpec& spec, double g, double omega_vib, int n_max,
                              std::size_t max_dimension = 4000);

SpectrumResult dense_vibronic_spectrum(const AggregateSpec& spec, double g, double omega_vib, int n_max,
                                       double epsilon, const std::vector<double>& grid,
                                       std::size_t max_dimension = 4000);

struct TimeDomainOptions {
    double epsilon{0.01};
    std::vector<double> omega_grid;
    double t_max{0.0};            // 0 picks 25 / epsilon
    double rel_tolerance{1e-10};  // per step
    double abs_tolerance{1e-12};
    double sample_interval{0.1};  // spacing of the stored c(t) samples
    double tail_tolerance{1e-7};  // bound on the neglected integral beyond t_max
};

struct TimeDomainResult {
    std::vector<double> omega;
    std::vector<Eigen::MatrixXcd> c_tilde;  // one N x N matrix per omega
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> c_time;   // c_nm(t) = <pi_n | psi_m^(0)(t)>
    double tail_bound{0.0};
    std::size_t steps{0};
};

// Integrates the noise-free time-domain hierarchy from psi^(0)(0) = |pi_m> with an adaptive
// Runge-Kutta-Fehlberg 7(8) scheme; c_tilde(s) = int_0^t_max e^{-st} c(t) dt is accumulated
// alongside the state. Throws std::runtime_error when the remaining tail exceeds tail_tolerance.
TimeDomainResult time_domain_reference(const Model& model, int e_max, const TimeDomainOptions& options);

}  // namespace hopspec

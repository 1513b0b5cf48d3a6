#include "hopspec/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hopspec {

namespace {

void check_mode(double g, double omega_vib, int n_max) {
    if (!(std::isfinite(g) && g >= 0.0)) throw std::invalid_argument("g must be finite and >= 0");
    if (!(std::isfinite(omega_vib) && omega_vib > 0.0)) throw std::invalid_argument("mode frequency must be > 0");
    if (n_max < 0) throw std::invalid_argument("Fock cutoff must be >= 0");
}

StickSpectrum collect(const Eigen::VectorXd& energies, const Eigen::VectorXd& amplitudes) {
    StickSpectrum out;
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        const double w = amplitudes[i] * amplitudes[i];
        if (w == 0.0) continue;
        out.sticks.push_back({energies[i], w});
        out.normalization += w;
    }
    std::sort(out.sticks.begin(), out.sticks.end(), [](const Stick& a, const Stick& b) { return a.omega < b.omega; });
    return out;
}

}  // namespace

double poisson_tail(double huang_rhys, int n_max) {
    if (huang_rhys < 0.0) throw std::invalid_argument("Huang-Rhys factor must be >= 0");
    if (huang_rhys == 0.0) return 0.0;
    // Sum the tail directly; 1 - head loses everything to cancellation.
    double term = std::exp(-huang_rhys);
    for (int n = 1; n <= n_max + 1; ++n) term *= huang_rhys / n;
    double tail = 0.0;
    for (int n = n_max + 1; term > 1e-300; ++n) {
        tail += term;
        term *= huang_rhys / (n + 1);
        if (n > n_max + 10000) break;
    }
    return tail;
}

StickSpectrum franck_condon_monomer(double g, double omega_vib, int n_max) {
    check_mode(g, omega_vib, n_max);
    const double s = g / (omega_vib * omega_vib);
    const double tail = poisson_tail(s, n_max);
    if (tail > 1e-10) {
        throw std::runtime_error("Fock cutoff " + std::to_string(n_max) + " leaves a Poisson tail of " +
                                 std::to_string(tail));
    }
    const int dim = n_max + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const double kappa = std::sqrt(g);
    for (int v = 0; v < dim; ++v) {
        h(v, v) = omega_vib * v;
        if (v + 1 < dim) h(v, v + 1) = h(v + 1, v) = kappa * std::sqrt(double(v + 1));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    if (eig.info() != Eigen::Success) throw std::runtime_error("vibronic diagonalization failed");
    return collect(eig.eigenvalues(), eig.eigenvectors().row(0).transpose());
}

std::vector<double> broaden(const StickSpectrum& sticks, double epsilon, const std::vector<double>& grid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    std::vector<double> f(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (const auto& st : sticks.sticks) {
            const double d = grid[i] - st.omega;
            f[i] += st.weight * epsilon / (epsilon * epsilon + d * d);
        }
    }
    return f;
}

StickSpectrum vibronic_sticks(const AggregateSpec& spec, double g, double omega_vib, int n_max,
                              std::size_t max_dimension) {
    spec.validate();
    check_mode(g, omega_vib, n_max);
    const int n = spec.n_monomers;
    const std::size_t levels = static_cast<std::size_t>(n_max) + 1;
    std::size_t vib = 1;
    for (int m = 0; m < n; ++m) {
        if (vib > max_dimension / levels) throw std::length_error("vibronic basis exceeds the dimension cap");
        vib *= levels;
    }
    if (vib > max_dimension / static_cast<std::size_t>(n)) throw std::length_error("vibronic basis exceeds the dimension cap");
    const auto dim = static_cast<Eigen::Index>(vib * n);

    // |site, v_1 .. v_N>, vibrational index mixed radix with mode 0 fastest.
    std::vector<std::size_t> stride(n, 1);
    for (int m = 1; m < n; ++m) stride[m] = stride[m - 1] * levels;
    auto quantum = [&](std::size_t v, int mode) { return static_cast<int>((v / stride[mode]) % levels); };

    const Eigen::MatrixXcd hsys = build_system_hamiltonian(spec);
    const double kappa = std::sqrt(g);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int a = 0; a < n; ++a) {
        for (std::size_t v = 0; v < vib; ++v) {
            const Eigen::Index row = static_cast<Eigen::Index>(a * vib + v);
            double phonons = 0.0;
            for (int m = 0; m < n; ++m) phonons += quantum(v, m);
            h(row, row) = hsys(a, a).real() + omega_vib * phonons;
            for (int b = 0; b < n; ++b) {
                if (b != a && hsys(a, b) != cplx{}) h(row, static_cast<Eigen::Index>(b * vib + v)) = hsys(a, b).real();
            }
            // Only the excited site's mode is displaced.
            const int q = quantum(v, a);
            if (q + 1 < static_cast<int>(levels)) {
                const Eigen::Index up = static_cast<Eigen::Index>(a * vib + v + stride[a]);
                h(row, up) = h(up, row) = kappa * std::sqrt(double(q + 1));
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    if (eig.info() != Eigen::Success) throw std::runtime_error("vibronic diagonalization failed");
    Eigen::VectorXd bright = Eigen::VectorXd::Zero(dim);
    const auto mu = spec.dipoles();
    for (int a = 0; a < n; ++a) bright += mu[a] * eig.eigenvectors().row(static_cast<Eigen::Index>(a * vib)).transpose();
    return collect(eig.eigenvalues(), bright);
}

SpectrumResult dense_vibronic_spectrum(const AggregateSpec& spec, double g, double omega_vib, int n_max,
                                       double epsilon, const std::vector<double>& grid, std::size_t max_dimension) {
    const StickSpectrum sticks = vibronic_sticks(spec, g, omega_vib, n_max, max_dimension);
    SpectrumResult out;
    out.omega = grid;
    out.f = broaden(sticks, epsilon, grid);
    out.meta["source"] = "dense vibronic diagonalization";
    out.meta["fock_cutoff"] = n_max;
    out.meta["sticks"] = sticks.sticks.size();
    return out;
}

}  // namespace hopspec

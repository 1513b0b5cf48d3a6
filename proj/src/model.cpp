#include "hopspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hopspec {

namespace {

bool finite(double x) noexcept { return std::isfinite(x); }
bool finite(cplx z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::string_view to_string(Geometry g) noexcept {
    return g == Geometry::Ring ? "ring" : "linear";
}

Geometry parse_geometry(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "linear" || lower == "chain") return Geometry::Linear;
    if (lower == "ring" || lower == "circular") return Geometry::Ring;
    throw std::invalid_argument("unknown geometry '" + std::string(text) + "' (expected linear or ring)");
}

void AggregateSpec::validate() const {
    if (n_monomers < 1) {
        throw std::invalid_argument("aggregate needs at least one monomer");
    }
    if (geometry == Geometry::Ring && n_monomers < 3) {
        throw std::invalid_argument("ring geometry requires at least 3 monomers (got " +
                                    std::to_string(n_monomers) + ")");
    }
    if (!finite(coupling) || !finite(angle)) {
        throw std::invalid_argument("coupling and angle must be finite");
    }
    if (!site_energies.empty() && static_cast<int>(site_energies.size()) != n_monomers) {
        throw std::invalid_argument("site_energies must have one entry per monomer");
    }
    if (!dipole_magnitudes.empty() && static_cast<int>(dipole_magnitudes.size()) != n_monomers) {
        throw std::invalid_argument("dipole magnitudes must have one entry per monomer");
    }
    if (!std::all_of(site_energies.begin(), site_energies.end(), [](double e) { return finite(e); }) ||
        !std::all_of(dipole_magnitudes.begin(), dipole_magnitudes.end(), [](double m) { return finite(m); })) {
        throw std::invalid_argument("site energies and dipoles must be finite");
    }
    if (!dipole_parallel) {
        throw std::invalid_argument("only parallel transition dipoles are supported");
    }
}

double AggregateSpec::site_energy(int n) const {
    return site_energies.empty() ? 0.0 : site_energies.at(static_cast<std::size_t>(n));
}

double AggregateSpec::dipole(int n) const {
    return dipole_magnitudes.empty() ? 1.0 : dipole_magnitudes.at(static_cast<std::size_t>(n));
}

std::vector<double> AggregateSpec::dipoles() const {
    std::vector<double> mu(static_cast<std::size_t>(n_monomers));
    for (int n = 0; n < n_monomers; ++n) mu[static_cast<std::size_t>(n)] = dipole(n);
    return mu;
}

double AggregateSpec::bond() const {
    double c = std::cos(angle);
    if (std::abs(c) < 1e-15) c = 0.0;
    return coupling * c;
}

BathTerm BathTerm::lorentzian(double g, double gamma, double omega) {
    return BathTerm{cplx{g, 0.0}, cplx{gamma, omega}};
}

void BathTerm::validate() const {
    if (!finite(weight) || !finite(decay)) {
        throw std::invalid_argument("bath term parameters must be finite");
    }
    if (decay.real() < 0.0) {
        throw std::invalid_argument("bath term damping Re(decay) must be >= 0 (got " +
                                    std::to_string(decay.real()) + ")");
    }
}

BathSpec BathSpec::shared(int n_monomers, std::vector<BathTerm> terms) {
    if (n_monomers < 1) throw std::invalid_argument("bath needs at least one monomer");
    BathSpec bath;
    bath.per_monomer_terms.assign(static_cast<std::size_t>(n_monomers), std::move(terms));
    return bath;
}

BathSpec BathSpec::lorentzian(int n_monomers, double g, double gamma, double omega) {
    return shared(n_monomers, {BathTerm::lorentzian(g, gamma, omega)});
}

int BathSpec::term_count() const noexcept {
    std::size_t m = 0;
    for (const auto& terms : per_monomer_terms) m += terms.size();
    return static_cast<int>(m);
}

std::vector<int> BathSpec::slot_monomers() const {
    std::vector<int> owner;
    owner.reserve(static_cast<std::size_t>(term_count()));
    for (std::size_t n = 0; n < per_monomer_terms.size(); ++n) {
        owner.insert(owner.end(), per_monomer_terms[n].size(), static_cast<int>(n));
    }
    return owner;
}

std::vector<BathTerm> BathSpec::flattened_terms() const {
    std::vector<BathTerm> flat;
    flat.reserve(static_cast<std::size_t>(term_count()));
    for (const auto& terms : per_monomer_terms) flat.insert(flat.end(), terms.begin(), terms.end());
    return flat;
}

bool BathSpec::is_shared() const noexcept {
    if (per_monomer_terms.empty()) return true;
    const auto& first = per_monomer_terms.front();
    return std::all_of(per_monomer_terms.begin(), per_monomer_terms.end(), [&](const auto& terms) {
        return terms.size() == first.size() &&
               std::equal(terms.begin(), terms.end(), first.begin(), [](const BathTerm& a, const BathTerm& b) {
                   return a.weight == b.weight && a.decay == b.decay;
               });
    });
}

void BathSpec::validate() const {
    if (per_monomer_terms.empty()) throw std::invalid_argument("bath has no monomers");
    for (std::size_t n = 0; n < per_monomer_terms.size(); ++n) {
        if (per_monomer_terms[n].empty()) {
            throw std::invalid_argument("monomer " + std::to_string(n + 1) + " has no bath terms");
        }
        for (const auto& term : per_monomer_terms[n]) term.validate();
    }
}

void Model::validate() const {
    aggregate.validate();
    bath.validate();
    if (bath.n_monomers() != aggregate.n_monomers) {
        throw std::invalid_argument("bath describes " + std::to_string(bath.n_monomers()) +
                                    " monomers but the aggregate has " + std::to_string(aggregate.n_monomers));
    }
}

Eigen::MatrixXcd build_system_hamiltonian(const AggregateSpec& spec) {
    spec.validate();
    const int n = spec.n_monomers;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = spec.site_energy(i);

    const double v = spec.bond();
    for (int i = 0; i + 1 < n; ++i) {
        h(i, i + 1) = v;
        h(i + 1, i) = v;
    }
    if (spec.geometry == Geometry::Ring) {
        h(0, n - 1) = v;
        h(n - 1, 0) = v;
    }
    return h;
}

cplx correlation_at_zero(const BathSpec& bath, int monomer) {
    if (monomer < 0 || monomer >= bath.n_monomers()) {
        throw std::out_of_range("monomer index " + std::to_string(monomer) + " out of range");
    }
    cplx sum{0.0, 0.0};
    for (const auto& term : bath.per_monomer_terms[static_cast<std::size_t>(monomer)]) sum += term.weight;
    return sum;
}

double spectral_density(const BathTerm& term, double omega) {
    if (term.gamma() == 0.0) {
        throw std::domain_error("spectral density is a delta distribution at gamma = 0");
    }
    return 2.0 * (term.weight / (term.decay - cplx{0.0, omega})).real();
}

}  // namespace hopspec

#include "hopspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hopspec {

namespace {

// Strengths this small are symmetry zeros polluted by roundoff.
double snap(double f) { return std::abs(f) < 1e-20 ? 0.0 : f; }

// cos(pi/2) and friends come out as ~1e-16 rather than 0.
double snap_frequency(double w, double bond) { return std::abs(w) < 1e-14 * std::max(1.0, std::abs(bond)) ? 0.0 : w; }

void check_inputs(int n, double coupling, double angle) {
    if (n < 1) throw std::invalid_argument("N must be at least 1");
    if (!std::isfinite(coupling) || !std::isfinite(angle)) throw std::invalid_argument("V and theta must be finite");
}

}  // namespace

double ModeTable::total_strength() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.strength;
    return s;
}

ModeTable chain_modes(int n, double coupling, double angle) {
    check_inputs(n, coupling, angle);
    ModeTable t{Geometry::Linear, n, coupling, angle, {}};
    const double bond = coupling * std::cos(angle);
    const double pi = std::numbers::pi;
    const double norm = std::sqrt(2.0 / (n + 1));
    for (int j = 1; j <= n; ++j) {
        const double k = j * pi / (n + 1);
        double sum = 0.0;
        for (int site = 1; site <= n; ++site) sum += norm * std::sin(k * site);
        const double cot = 1.0 / std::tan(0.5 * k);
        const double closed = j % 2 == 1 ? 2.0 / (n + 1) * cot * cot : 0.0;
        t.entries.push_back({j, snap_frequency(2.0 * bond * std::cos(k), bond), snap(sum * sum), closed});
    }
    return t;
}

ModeTable ring_modes(int n, double coupling, double angle) {
    check_inputs(n, coupling, angle);
    if (n < 3) throw std::invalid_argument("a ring needs N >= 3");
    ModeTable t{Geometry::Ring, n, coupling, angle, {}};
    const double bond = coupling * std::cos(angle);
    const double pi = std::numbers::pi;
    for (int j = 1; j <= n; ++j) {
        const double k = 2.0 * pi * j / n;
        cplx sum{0.0, 0.0};
        for (int site = 1; site <= n; ++site) sum += std::polar(1.0 / std::sqrt(double(n)), k * site);
        const double printed = j == n ? double(n - 1) * (n - 1) / n : 0.0;
        t.entries.push_back({j, snap_frequency(2.0 * bond * std::cos(k), bond), snap(std::norm(sum)), printed});
    }
    return t;
}

ModeTable analytic_modes(Geometry geometry, int n, double coupling, double angle) {
    return geometry == Geometry::Ring ? ring_modes(n, coupling, angle) : chain_modes(n, coupling, angle);
}

}  // namespace hopspec

#include "hopspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hopspec {

double absorption(const CorrelationBlock& block, std::span<const double> dipoles) {
    const auto n = block.c_tilde.rows();
    if (block.c_tilde.cols() != n || static_cast<Eigen::Index>(dipoles.size()) != n) {
        throw std::invalid_argument("dipole count does not match the correlation block");
    }
    double f = 0.0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            f += dipoles[static_cast<std::size_t>(a)] * dipoles[static_cast<std::size_t>(b)] * block.c_tilde(a, b).real();
    return f;
}

std::span<const double> SpectrumResult::row(std::size_t r) const {
    if (r >= rows()) throw std::out_of_range("spectrum row out of range");
    return std::span<const double>(f).subspan(r * omega.size(), omega.size());
}

void SpectrumResult::validate() const {
    if (f.size() != omega.size() * rows()) throw std::logic_error("spectrum size does not match grid x axis");
}

namespace {

double max_residual(const std::vector<CorrelationBlock>& blocks) {
    double worst = 0.0;
    for (const auto& b : blocks) worst = std::max(worst, b.residual);
    return worst;
}

}  // namespace

SpectrumResult make_spectrum(const std::vector<CorrelationBlock>& blocks, std::span<const double> dipoles) {
    SpectrumResult out;
    out.omega.reserve(blocks.size());
    out.f.reserve(blocks.size());
    for (const auto& b : blocks) {
        out.omega.push_back(b.s.omega);
        out.f.push_back(absorption(b, dipoles));
    }
    out.meta["residual_max"] = max_residual(blocks);
    return out;
}

SpectrumResult make_spectrum(const std::vector<std::vector<CorrelationBlock>>& rows, std::span<const double> dipoles,
                             const ParameterAxis& axis) {
    if (rows.size() != axis.values.size()) throw std::invalid_argument("row count does not match axis length");
    SpectrumResult out;
    out.axis_name = std::string(to_string(axis.name));
    out.axis_values = axis.values;
    double worst = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == 0) {
            for (const auto& b : rows[r]) out.omega.push_back(b.s.omega);
        } else if (rows[r].size() != out.omega.size()) {
            throw std::invalid_argument("ragged parameter sweep");
        }
        for (const auto& b : rows[r]) out.f.push_back(absorption(b, dipoles));
        worst = std::max(worst, max_residual(rows[r]));
    }
    out.meta["residual_max"] = worst;
    return out;
}

SpectrumResult compute_spectrum(const Model& model, const SweepPlan& plan) {
    const std::vector<double> mu = model.aggregate.dipoles();
    SpectrumResult out;
    std::size_t solves = 0;
    if (plan.parameter_axis) {
        const auto rows = sweep_parameter(model, plan);
        out = make_spectrum(rows, mu, *plan.parameter_axis);
        solves = rows.size() * plan.omega_grid.size();
    } else {
        out = make_spectrum(sweep_frequency(model, plan), mu);
        solves = plan.omega_grid.size();
    }
    out.meta["solves"] = solves;
    return out;
}

IntensityReport integrated_intensity(std::span<const double> omega, std::span<const double> f) {
    if (omega.size() != f.size()) throw std::invalid_argument("grid and spectrum differ in length");
    if (omega.size() < 2) throw std::invalid_argument("need at least two grid points to integrate");
    IntensityReport report;
    for (std::size_t i = 1; i < omega.size(); ++i) {
        report.integral += 0.5 * (omega[i] - omega[i - 1]) * (f[i] + f[i - 1]);
    }
    const double peak = *std::max_element(f.begin(), f.end());
    const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
    report.boundary_ratio = peak > 0.0 ? edge / peak : 1.0;
    report.boundary_ok = report.boundary_ratio < 1e-4;
    return report;
}

IntensityReport integrated_intensity(const SpectrumResult& result, std::size_t row) {
    return integrated_intensity(result.omega, result.row(row));
}

const Peak& PeakList::dominant() const {
    if (peaks.empty()) throw std::logic_error("no peaks");
    return *std::max_element(peaks.begin(), peaks.end(),
                             [](const Peak& a, const Peak& b) { return a.height < b.height; });
}

PeakList find_peaks(std::span<const double> omega, std::span<const double> f, double rel_threshold,
                    double min_separation) {
    if (omega.size() != f.size()) throw std::invalid_argument("grid and spectrum differ in length");
    if (f.empty()) throw std::invalid_argument("empty spectrum");
    if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");

    const std::size_t n = f.size();
    const double fmax = *std::max_element(f.begin(), f.end());
    const double cut = rel_threshold * fmax;

    std::vector<std::size_t> maxima;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i == 0 || f[i] > f[i - 1];
        // Plateaus count once, at their left edge.
        const bool right = i + 1 == n || f[i] >= f[i + 1];
        if (left && right && f[i] > cut && n > 1) maxima.push_back(i);
    }

    // Topographic prominence: height above the higher of the two saddles that
    // separate the maximum from taller terrain (or from the grid edge).
    auto prominence = [&](std::size_t i) {
        double left_min = f[i];
        std::size_t j = i;
        while (j > 0 && f[j - 1] <= f[i]) left_min = std::min(left_min, f[--j]);
        if (j == 0) left_min = std::min(left_min, f[0]);
        double right_min = f[i];
        j = i;
        while (j + 1 < n && f[j + 1] <= f[i]) right_min = std::min(right_min, f[++j]);
        return f[i] - std::max(left_min, right_min);
    };

    PeakList list;
    for (std::size_t i : maxima) {
        Peak p{omega[i], f[i], prominence(i)};
        if (i > 0 && i + 1 < n) {
            const double y0 = f[i - 1], y1 = f[i], y2 = f[i + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            if (denom < 0.0) {
                const double shift = 0.5 * (y0 - y2) / denom;  // in units of the local step, |shift| <= 1/2
                const double h = shift >= 0.0 ? omega[i + 1] - omega[i] : omega[i] - omega[i - 1];
                p.omega = omega[i] + shift * h;
                p.height = y1 - 0.25 * (y0 - y2) * shift;
            }
        }
        if (!list.peaks.empty() && p.omega - list.peaks.back().omega < min_separation) {
            if (p.height > list.peaks.back().height) list.peaks.back() = p;
            continue;
        }
        list.peaks.push_back(p);
    }
    return list;
}

PeakList find_peaks(const SpectrumResult& result, double rel_threshold, double min_separation, std::size_t row) {
    return find_peaks(result.omega, result.row(row), rel_threshold, min_separation);
}

}  // namespace hopspec

// spectrum.hpp: absorption spectrum F(omega) from correlation blocks, peaks and sum-rule checks

#pragma once

#include "hopspec/solver.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace hopspec {

// F = sum_{n,m} mu_n mu_m Re c_tilde(n, m)  (parallel dipoles, units of mu^2).
double absorption(const CorrelationBlock& block, std::span<const double> dipoles);

struct SpectrumResult {
    std::vector<double> omega;
    std::vector<double> f;                  // row-major [axis value][omega] for 2-D sweeps
    std::string axis_name;                  // empty for a single spectrum
    std::vector<double> axis_values;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t rows() const noexcept { return axis_values.empty() ? 1 : axis_values.size(); }
    std::span<const double> row(std::size_t r) const;
    void validate() const;
};

SpectrumResult make_spectrum(const std::vector<CorrelationBlock>& blocks, std::span<const double> dipoles);
SpectrumResult make_spectrum(const std::vector<std::vector<CorrelationBlock>>& rows, std::span<const double> dipoles,
                             const ParameterAxis& axis);

// Model + plan -> spectrum (single or 2-D depending on plan.parameter_axis). Fills
// meta with the residual maximum and the solve count.
SpectrumResult compute_spectrum(const Model& model, const SweepPlan& plan);

struct IntensityReport {
    double integral{0.0};
    double boundary_ratio{0.0};  // max(|F(first)|, |F(last)|) / max F
    bool boundary_ok{true};      // boundary_ratio < 1e-4
};

// Trapezoidal integral of one row. For unit dipoles the exact value is pi * N.
IntensityReport integrated_intensity(std::span<const double> omega, std::span<const double> f);
IntensityReport integrated_intensity(const SpectrumResult& result, std::size_t row = 0);

struct Peak {
    double omega{0.0};
    double height{0.0};
    double prominence{0.0};
};

struct PeakList {
    std::vector<Peak> peaks;

    std::size_t size() const noexcept { return peaks.size(); }
    bool empty() const noexcept { return peaks.empty(); }
    // Highest peak; throws when empty.
    const Peak& dominant() const;
};

inline constexpr double kDefaultPeakThreshold = 1e-3;

// Local maxima above rel_threshold * max(f); maxima closer than min_separation are merged
// (the higher survives); positions refined by a 3-point parabola.
PeakList find_peaks(std::span<const double> omega, std::span<const double> f, double rel_threshold,
                    double min_separation);
PeakList find_peaks(const SpectrumResult& result, double rel_threshold, double min_separation, std::size_t row = 0);

}  // namespace hopspec

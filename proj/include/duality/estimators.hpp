#ifndef DUALITY_ESTIMATORS_HPP
#define DUALITY_ESTIMATORS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duality/analytics.hpp"
#include "duality/core_model.hpp"
#include "duality/sampler.hpp"

namespace duality {

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t bin_count = 1;
    std::vector<std::uint64_t> counts;
    std::uint64_t underflow = 0; // x < lo
    std::uint64_t overflow = 0;  // x > hi

    double bin_width() const { return (hi - lo) / static_cast<double>(bin_count); }
    double center(std::size_t i) const {
        return lo + (static_cast<double>(i) + 0.5) * bin_width();
    }
    std::uint64_t total_in_range() const;
    std::uint64_t total() const { return total_in_range() + underflow + overflow; }

    /// Half-open bins [edge_i, edge_{i+1}); the last bin also takes x == hi.
    void add(double x);
};

Histogram histogram(std::span<const double> xs, double lo, double hi,
                    std::size_t bin_count);

/// Empirical fringe statistics from one fit.
struct FringeStats {
    double visibility = 0.0;       // clamped to [0, 1]
    double phase = 0.0;            // radians, fringe pattern ~ cos(kx + phase)
    double fringe_width_est = 0.0; // from the secondary free-frequency fit
    double fit_rms = 0.0;          // weighted rms residual, envelope-normalized units
    std::uint64_t n_events = 0;    // 0 for analytic (infinite-statistics) input
};

/// Envelope-normalized visibility by weighted least squares.
///
/// Bin densities are divided by the analytic envelope
///   E(x) = 2 |A_t|^2 e^{-(x^2+d^2/4)/2 sigma^2} cosh(xd/2 sigma^2) / N^2,
/// then fit over the central window |x| <= 2w to
///   b0 (1 + V cos(kx + phase) / cosh(xd/2 sigma^2)),
/// with k = 2 pi / fringe_width(cfg) held fixed. The 1/cosh factor is the
/// known position-dependent contrast attenuation, so the fitted V is the
/// central, bound-saturating visibility; b0 absorbs subensemble
/// normalization. Histogram counts get Poisson weights 1/max(count, 1).
///
/// Throws std::invalid_argument when the input spans less than 3 fringe
/// widths around the center, std::runtime_error on a degenerate fit.
FringeStats estimate_visibility(const Histogram& hist, const ExperimentConfig& cfg);

/// Same fit on an exact analytic pattern (densities instead of counts,
/// uniform weights).
FringeStats estimate_visibility(const PatternSamples& pattern,
                                const ExperimentConfig& cfg);

/// Wrapped fringe-phase difference phase_a - phase_b in (-pi, pi].
double phase_shift(const FringeStats& a, const FringeStats& b);

/// Empirical duality check on a location-sorted run: analytic D, per-
/// subensemble visibilities, Y fraction, and the bound sum V_bound + D (= 1).
/// The N subensemble is the interference-bearing one; only clicks that gave
/// no which-way information contribute to it.
struct DualityReport {
    double d_analytic = 0.0;
    double v_bound = 0.0;
    double sum_check = 0.0; // v_bound + d_analytic
    double y_fraction = 0.0;
    std::uint64_t n_events = 0;
    std::optional<FringeStats> v_subensemble_y; // empty when flagged
    std::optional<FringeStats> v_subensemble_n;
    std::vector<std::string> flags;
};

/// Requires events from a location or location_then_which_way run.
/// Empty or unfittable subensembles are flagged, never fatal.
DualityReport duality_report(std::span<const DetectionEvent> events,
                             const ExperimentConfig& cfg);

} // namespace duality

#endif

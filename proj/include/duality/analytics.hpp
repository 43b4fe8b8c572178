#ifndef DUALITY_ANALYTICS_HPP
#define DUALITY_ANALYTICS_HPP

#include <span>
#include <string>
#include <vector>

#include "duality/core_model.hpp"

namespace duality {

/// Screen intensity p(x), the expanded real form of the general pattern:
/// |A_t|^2 [h+ + h- + 2 E (Re Z cos(kx) + Im Z sin(kx))] / N^2
/// with Z = 1 - c + c r e^{i theta}. Agrees with JointAmplitudes::density
/// (an independent complex-amplitude evaluation) to 1e-12 relative.
double intensity(double x, const ExperimentConfig& cfg);
double intensity(double x, const ExperimentConfig& cfg, const PropagationState& prop,
                 double norm_sq);

/// The theta = 0 cosh/cos product form,
/// 2 |A_t|^2 e^{-(x^2+d^2/4)/2 sigma^2} cosh(xd/2 sigma^2)
///   * (1 + V0 cos(kx)/cosh(xd/2 sigma^2)) / N^2,  V0 = 1 - c + c r.
/// Rejects theta != 0 with std::invalid_argument.
double intensity_closed_form_theta0(double x, const ExperimentConfig& cfg);

/// Fringe width w = wavelength L / d + 16 pi^2 eps^4 / (wavelength d L).
/// Throws std::domain_error at L = 0 (no far-field fringes).
double fringe_width(const ExperimentConfig& cfg);

/// Which-way distinguishability D = c (1 - r).
double distinguishability(const ExperimentConfig& cfg);

/// Upper bound on fringe visibility, V <= 1 - c + c r. Satisfies
/// visibility_bound + distinguishability = 1 identically.
double visibility_bound(const ExperimentConfig& cfg);

/// Position-dependent visibility V(x) = (1 - c + c r) / cosh(xd / 2 sigma^2)
/// for theta = 0 configs; equals the bound only at x = 0.
double analytic_visibility_at(double x, const ExperimentConfig& cfg);

/// Uniform-grid discretization of the intensity pattern.
struct PatternSamples {
    std::vector<double> xs;
    std::vector<double> intensities;
    ExperimentConfig config;
};

PatternSamples sample_pattern(const ExperimentConfig& cfg, double lo, double hi,
                              std::size_t points);

/// One row of the duality sweep: the analytic D and V bound plus the
/// estimator-measured V on the analytic pattern.
struct DualityRow {
    double c = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double dist = 0.0;         // D = c (1 - r)
    double v_bound = 0.0;      // 1 - c + c r
    double v_measured = 0.0;   // NaN when the estimator failed
    double sum_bound = 0.0;    // v_bound + dist, = 1 algebraically
    double sum_measured = 0.0; // v_measured + dist
    std::string status;        // "ok", "beyond-paper-derivation", or "error: ..."
};

/// Cross product of the three grids, one row per (c, r, theta) in input order.
/// Estimator failures flag the row; the sweep itself never aborts.
/// theta != 0 rows are flagged "beyond-paper-derivation": the duality bound
/// still holds there (|1-c+c r e^{i theta}| <= 1-c+cr) but the closed-form
/// derivation it comes from assumes theta = 0.
std::vector<DualityRow> duality_sweep(std::span<const double> c_values,
                                      std::span<const double> r_values,
                                      std::span<const double> theta_values,
                                      const ExperimentConfig& base);

} // namespace duality

#endif

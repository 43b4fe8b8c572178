#include "duality/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "duality/estimators.hpp"

namespace duality {

namespace {

constexpr double kPi = 3.141592653589793238462643;

// Envelope * cosh evaluated as the always-finite half-sum of the two slit
// humps; avoids 0 * inf once cosh overflows far in the tails.
double hump(double x, double center, double sigma_sq) {
    const double dx = x - center;
    const double arg = -dx * dx / (2.0 * sigma_sq);
    return arg < -707.0 ? 0.0 : std::exp(arg);
}

} // namespace

double intensity(double x, const ExperimentConfig& cfg, const PropagationState& prop,
                 double norm_sq) {
    const double d = cfg.slit_separation_d;
    const double sig_sq = prop.sigma_sq;
    const double hp = hump(x, 0.5 * d, sig_sq);
    const double hm = hump(x, -0.5 * d, sig_sq);

    const double env_arg = -(x * x + 0.25 * d * d) / (2.0 * sig_sq);
    const double envelope = env_arg < -707.0 ? 0.0 : std::exp(env_arg);

    // cross-term phase k x with k = d beta / (4 eps^2 sigma^2) = 2 pi / w
    const double eps = cfg.slit_width_epsilon;
    const double k = d * prop.beta_value / (4.0 * eps * eps * sig_sq);
    const double re_z = 1.0 - cfg.presence_c +
                        cfg.presence_c * cfg.overlap_r * std::cos(cfg.overlap_phase_theta);
    const double im_z = cfg.presence_c * cfg.overlap_r * std::sin(cfg.overlap_phase_theta);
    const double cross = 2.0 * envelope * (re_z * std::cos(k * x) + im_z * std::sin(k * x));

    const double a_sq = std::norm(prop.a_t);
    return a_sq * (hp + hm + cross) / norm_sq;
}

double intensity(double x, const ExperimentConfig& cfg) {
    return intensity(x, cfg, PropagationState::from(cfg), norm_constant(cfg));
}

double intensity_closed_form_theta0(double x, const ExperimentConfig& cfg) {
    if (cfg.overlap_phase_theta != 0.0) {
        throw std::invalid_argument(
            "intensity_closed_form_theta0 requires overlap_phase_theta = 0");
    }
    const double d = cfg.slit_separation_d;
    const PropagationState prop = PropagationState::from(cfg);
    const double sig_sq = prop.sigma_sq;
    const double eps = cfg.slit_width_epsilon;

    const double cosh_arg = x * d / (2.0 * sig_sq);
    const double k = d * prop.beta_value / (4.0 * eps * eps * sig_sq);
    const double v0 = 1.0 - cfg.presence_c + cfg.presence_c * cfg.overlap_r;

    // env * cosh via the hump sum so the tails stay finite
    const double env_cosh =
        0.5 * (hump(x, 0.5 * d, sig_sq) + hump(x, -0.5 * d, sig_sq));
    const double ch = std::cosh(cosh_arg); // may be inf; v0 cos / inf -> 0
    const double fringe = 1.0 + v0 * std::cos(k * x) / ch;

    const double a_sq = std::norm(prop.a_t);
    return 2.0 * a_sq * env_cosh * fringe / norm_constant(cfg);
}

double fringe_width(const ExperimentConfig& cfg) {
    if (cfg.screen_distance_L <= 0.0) {
        throw std::domain_error("fringe width undefined at L = 0: no far-field fringes");
    }
    const double d = cfg.slit_separation_d;
    const double eps = cfg.slit_width_epsilon;
    const double lam = cfg.wavelength;
    const double L = cfg.screen_distance_L;
    const double eps4 = eps * eps * eps * eps;
    return lam * L / d + 16.0 * kPi * kPi * eps4 / (lam * d * L);
}

double distinguishability(const ExperimentConfig& cfg) {
    return cfg.presence_c * (1.0 - cfg.overlap_r);
}

double visibility_bound(const ExperimentConfig& cfg) {
    return 1.0 - cfg.presence_c + cfg.presence_c * cfg.overlap_r;
}

double analytic_visibility_at(double x, const ExperimentConfig& cfg) {
    if (cfg.overlap_phase_theta != 0.0) {
        throw std::invalid_argument("analytic_visibility_at requires overlap_phase_theta = 0");
    }
    const double arg = x * cfg.slit_separation_d / (2.0 * sigma_t_sq(cfg));
    return visibility_bound(cfg) / std::cosh(arg);
}

PatternSamples sample_pattern(const ExperimentConfig& cfg, double lo, double hi,
                              std::size_t points) {
    if (points < 2) {
        throw std::invalid_argument("sample_pattern requires at least 2 points");
    }
    const PropagationState prop = PropagationState::from(cfg);
    const double norm_sq = norm_constant(cfg);
    PatternSamples out;
    out.config = cfg;
    out.xs.reserve(points);
    out.intensities.reserve(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + step * static_cast<double>(i);
        out.xs.push_back(x);
        out.intensities.push_back(intensity(x, cfg, prop, norm_sq));
    }
    return out;
}

std::vector<DualityRow> duality_sweep(std::span<const double> c_values,
                                      std::span<const double> r_values,
                                      std::span<const double> theta_values,
                                      const ExperimentConfig& base) {
    std::vector<DualityRow> rows;
    rows.reserve(c_values.size() * r_values.size() * theta_values.size());
    for (double c : c_values) {
        for (double r : r_values) {
            for (double theta : theta_values) {
                ExperimentConfig cfg = base;
                cfg.presence_c = c;
                cfg.overlap_r = r;
                cfg.overlap_phase_theta = theta;
                cfg.validate();

                DualityRow row;
                row.c = c;
                row.r = r;
                row.theta = theta;
                row.dist = distinguishability(cfg);
                row.v_bound = visibility_bound(cfg);
                row.sum_bound = row.v_bound + row.dist;
                row.status = theta != 0.0 ? "beyond-paper-derivation" : "ok";
                try {
                    const double w = fringe_width(cfg);
                    const PatternSamples pattern =
                        sample_pattern(cfg, -4.0 * w, 4.0 * w, 801);
                    const FringeStats stats = estimate_visibility(pattern, cfg);
                    row.v_measured = stats.visibility;
                    row.sum_measured = row.v_measured + row.dist;
                } catch (const std::exception& e) {
                    row.v_measured = std::nan("");
                    row.sum_measured = std::nan("");
                    row.status += std::string("; error: ") + e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

} // namespace duality

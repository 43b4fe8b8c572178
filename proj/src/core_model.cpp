#include "duality/core_model.hpp"

#include <cmath>

namespace duality {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// exp() of a complex argument whose real part is below this would round to
// subnormal magnitudes; treat the amplitude as exactly zero instead.
constexpr double kUnderflowExponent = -707.0;

} // namespace

double beta(const ExperimentConfig& cfg) {
    return cfg.wavelength * cfg.screen_distance_L / kTwoPi;
}

double sigma_t_sq(const ExperimentConfig& cfg) {
    const double eps = cfg.slit_width_epsilon;
    const double b = beta(cfg);
    const double spread = b / (2.0 * eps);
    return eps * eps + spread * spread;
}

double sigma_t(const ExperimentConfig& cfg) {
    return std::sqrt(sigma_t_sq(cfg));
}

PropagationState PropagationState::from(const ExperimentConfig& cfg) {
    const double eps = cfg.slit_width_epsilon;
    const double b = beta(cfg);
    PropagationState p;
    p.beta_value = b;
    const double spread = b / (2.0 * eps);
    p.sigma_sq = eps * eps + spread * spread;
    p.complex_width = complexd(4.0 * eps * eps, 2.0 * b);
    // A_t = (1/sqrt 2) [sqrt(2 pi) (eps + i beta/2eps)]^(-1/2); Re(eps + i..) > 0
    // so the principal square root is the right branch.
    const complexd inner = std::sqrt(kTwoPi) * complexd(eps, spread);
    p.a_t = 1.0 / (std::sqrt(2.0) * std::sqrt(inner));
    return p;
}

DetectorQubit DetectorQubit::from(const ExperimentConfig& cfg) {
    const double r = cfg.overlap_r;
    const double th = cfg.overlap_phase_theta;
    DetectorQubit q;
    q.d2 = {complexd(1.0, 0.0), complexd(0.0, 0.0)};
    q.d1 = {std::polar(r, th), complexd(std::sqrt(1.0 - r * r), 0.0)};
    return q;
}

complexd gaussian_mode(double x, Slit slit, const ExperimentConfig& cfg,
                       const PropagationState& prop) {
    const double center = (slit == Slit::a ? 0.5 : -0.5) * cfg.slit_separation_d;
    const double dx = x - center;
    const complexd arg = -(dx * dx) / prop.complex_width;
    if (arg.real() < kUnderflowExponent) {
        return complexd(0.0, 0.0);
    }
    return prop.a_t * std::exp(arg);
}

complexd gaussian_mode(double x, Slit slit, const ExperimentConfig& cfg) {
    return gaussian_mode(x, slit, cfg, PropagationState::from(cfg));
}

double norm_constant(const ExperimentConfig& cfg) {
    const double d = cfg.slit_separation_d;
    const double eps = cfg.slit_width_epsilon;
    const double c = cfg.presence_c;
    const double r = cfg.overlap_r;
    const double overlap = std::exp(-d * d / (8.0 * eps * eps));
    return 1.0 + (1.0 - c + c * r * std::cos(cfg.overlap_phase_theta)) * overlap;
}

JointAmplitudes joint_amplitudes(double x, const ExperimentConfig& cfg,
                                 const PropagationState& prop, double norm_sq) {
    const complexd gp = gaussian_mode(x, Slit::a, cfg, prop);
    const complexd gm = gaussian_mode(x, Slit::b, cfg, prop);
    // slit A couples to d1, slit B leaves the detector in d2 = (1, 0)
    const DetectorQubit q = DetectorQubit::from(cfg);
    const double sqrt_c = std::sqrt(cfg.presence_c);

    JointAmplitudes j;
    j.x = x;
    j.amp_y1 = sqrt_c * q.d1[1] * gp;
    j.amp_y0 = sqrt_c * (q.d1[0] * gp + gm);
    j.amp_n0 = std::sqrt(1.0 - cfg.presence_c) * (gp + gm);
    j.density = (std::norm(j.amp_y1) + std::norm(j.amp_y0) + std::norm(j.amp_n0)) / norm_sq;
    return j;
}

JointAmplitudes joint_amplitudes(double x, const ExperimentConfig& cfg) {
    return joint_amplitudes(x, cfg, PropagationState::from(cfg), norm_constant(cfg));
}

} // namespace duality

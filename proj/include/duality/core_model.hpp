#ifndef DUALITY_CORE_MODEL_HPP
#define DUALITY_CORE_MODEL_HPP

#include <array>
#include <complex>

#include "duality/config.hpp"

namespace duality {

using complexd = std::complex<double>;

/// Dimensionless evolution parameter beta = hbar t / m = wavelength * L / (2 pi).
double beta(const ExperimentConfig& cfg);

/// sigma_t^2 = eps^2 + (beta / 2 eps)^2, the spread of each evolved slit mode.
double sigma_t_sq(const ExperimentConfig& cfg);

double sigma_t(const ExperimentConfig& cfg);

/// Everything the evolved single-slit Gaussian needs, precomputed once per config.
struct PropagationState {
    double beta_value;       // wavelength * L / (2 pi)
    double sigma_sq;         // eps^2 + (beta / 2 eps)^2
    complexd complex_width;  // 4 eps^2 + 2 i beta, denominator of the evolved exponent
    complexd a_t;            // (1/sqrt 2) [sqrt(2 pi) (eps + i beta / 2 eps)]^(-1/2)

    static PropagationState from(const ExperimentConfig& cfg);
};

/// The one-bit which-way detector embedded in a fixed orthonormal frame:
/// d2 = (1, 0), d1 = (r e^{i theta}, sqrt(1 - r^2)), so <d2|d1> = r e^{i theta}.
struct DetectorQubit {
    std::array<complexd, 2> d1; // components on (frame0, frame1)
    std::array<complexd, 2> d2;

    static DetectorQubit from(const ExperimentConfig& cfg);

    complexd overlap_d2_d1() const { // <d2|d1>
        return std::conj(d2[0]) * d1[0] + std::conj(d2[1]) * d1[1];
    }
};

enum class Slit { a, b }; // slit A centered at +d/2, slit B at -d/2

/// Evolved single-slit amplitude g_+-(x) = A_t exp(-(x -+ d/2)^2 / (4 eps^2 + 2 i beta)).
/// Returns exact 0 once the Gaussian magnitude would underflow to subnormals.
complexd gaussian_mode(double x, Slit slit, const ExperimentConfig& cfg);
complexd gaussian_mode(double x, Slit slit, const ExperimentConfig& cfg,
                       const PropagationState& prop);

/// Exact squared norm of the entangled state,
/// N^2 = 1 + (1 - c + c r cos theta) exp(-d^2 / 8 eps^2).
/// Independent of L (the evolution is unitary).
double norm_constant(const ExperimentConfig& cfg);

/// The three nonzero branch amplitudes of the particle-detector-location state
/// at screen position x, in the (location, detector-frame) basis. The
/// (N, frame1) branch is identically zero: d2 has no frame1 component.
struct JointAmplitudes {
    double x;
    complexd amp_y1; // (Y, frame1) = sqrt(c) sqrt(1-r^2) g+(x)
    complexd amp_y0; // (Y, frame0) = sqrt(c) (r e^{i theta} g+(x) + g-(x))
    complexd amp_n0; // (N, frame0) = sqrt(1-c) (g+(x) + g-(x))
    double density;  // (|amp_y1|^2 + |amp_y0|^2 + |amp_n0|^2) / N^2
};

JointAmplitudes joint_amplitudes(double x, const ExperimentConfig& cfg);
JointAmplitudes joint_amplitudes(double x, const ExperimentConfig& cfg,
                                 const PropagationState& prop, double norm_sq);

} // namespace duality

#endif

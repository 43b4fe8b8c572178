#ifndef DUALITY_CONFIG_HPP
#define DUALITY_CONFIG_HPP

#include <cstdint>

namespace duality {

/// All physical parameters of the two-slit setup with a quantum which-way
/// detector. Lengths share one arbitrary unit; hbar and the particle mass
/// never appear because the free evolution is parameterized by
/// beta = wavelength * L / (2 pi).
struct ExperimentConfig {
    double slit_separation_d = 1.0;   // Gaussian slit centers at +-d/2
    double slit_width_epsilon = 0.1;  // Gaussian width of each slit mode
    double wavelength = 0.01;         // de Broglie wavelength
    double screen_distance_L = 100.0; // propagation distance to the screen
    double presence_c = 0.5;          // weight of the detector-present branch, in [0,1]
    double overlap_r = 0.0;           // |<d1|d2>|, in [0,1]
    double overlap_phase_theta = 0.0; // phase of <d2|d1> = r e^{i theta}, in (-pi, pi]

    /// Throws std::invalid_argument naming the offending parameter.
    /// L = 0 is allowed (pattern at the slit plane).
    void validate() const;

    /// True when d < 4 eps: the slit modes overlap strongly and the
    /// near-unit normalization approximation degrades. Not an error;
    /// the exact norm is used everywhere regardless.
    bool slit_overlap_warning() const {
        return slit_separation_d < 4.0 * slit_width_epsilon;
    }
};

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace duality

#endif

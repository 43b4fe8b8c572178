#include "duality/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace duality {

namespace {

void require(bool ok, const char* param, double value, const char* what) {
    if (!ok) {
        std::ostringstream msg;
        msg << "invalid config: " << param << " = " << value << " (" << what << ")";
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

void ExperimentConfig::validate() const {
    require(std::isfinite(slit_separation_d) && slit_separation_d > 0.0,
            "slit_separation_d", slit_separation_d, "must be > 0");
    require(std::isfinite(slit_width_epsilon) && slit_width_epsilon > 0.0,
            "slit_width_epsilon", slit_width_epsilon, "must be > 0");
    require(std::isfinite(wavelength) && wavelength > 0.0,
            "wavelength", wavelength, "must be > 0");
    require(std::isfinite(screen_distance_L) && screen_distance_L >= 0.0,
            "screen_distance_L", screen_distance_L, "must be >= 0");
    require(std::isfinite(presence_c) && presence_c >= 0.0 && presence_c <= 1.0,
            "presence_c", presence_c, "must be in [0,1]");
    require(std::isfinite(overlap_r) && overlap_r >= 0.0 && overlap_r <= 1.0,
            "overlap_r", overlap_r, "must be in [0,1]");
    require(std::isfinite(overlap_phase_theta) &&
                overlap_phase_theta > -3.1415926535897932385 - 1e-12 &&
                overlap_phase_theta <= 3.1415926535897932385 + 1e-12,
            "overlap_phase_theta", overlap_phase_theta, "must be in (-pi, pi]");
}

} // namespace duality

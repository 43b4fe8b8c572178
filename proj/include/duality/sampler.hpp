#ifndef DUALITY_SAMPLER_HPP
#define DUALITY_SAMPLER_HPP

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "duality/core_model.hpp"
#include "duality/rng.hpp"

namespace duality {

/// What was measured in coincidence with a screen detection.
enum class Basis {
    which_way,                // detector qubit in the frame basis (requires c = 1)
    eraser,                   // detector qubit in the d+- basis (requires c = 1, r = 0)
    location,                 // location ancilla in the {Y, N} basis
    location_then_which_way,  // location first, then frame basis inside the Y branch
    none
};

enum class LocationOutcome { y, n, unmeasured };
enum class DetectorOutcome { frame0, frame1, plus, minus, unmeasured };

struct DetectionEvent {
    std::uint64_t index = 0;
    double x = 0.0;
    Basis basis = Basis::none;
    LocationOutcome location_outcome = LocationOutcome::unmeasured;
    DetectorOutcome detector_outcome = DetectorOutcome::unmeasured;
};

/// Fixed basis, or a random per-event choice with given probabilities.
struct BasisPolicy {
    std::vector<std::pair<Basis, double>> choices;

    static BasisPolicy fixed(Basis b) { return BasisPolicy{{{b, 1.0}}}; }

    /// Throws std::invalid_argument unless probabilities are >= 0 and sum to 1.
    void validate() const;
};

/// n i.i.d. screen positions from the normalized intensity, by acceptance-
/// rejection with proposal q(x) = (|g+|^2 + |g-|^2) (an equal mixture of the
/// two evolved slit humps) and bound constant M = 2/N^2. The bound is exact:
/// |cross| <= 2|g+||g-| <= |g+|^2 + |g-|^2, so the target never exceeds M q.
/// Throws std::runtime_error if the observed acceptance rate drops below
/// 1e-3 over 1e5 consecutive proposals (an internal bug, not user error).
std::vector<double> sample_positions(const ExperimentConfig& cfg, std::size_t n,
                                     const RngStreamSpec& rng);

/// One coincidence measurement on the detector/location system, conditioned
/// on a particle detected at x. Outcomes follow the Born rule on the branch
/// amplitudes. Preconditions: eraser requires presence_c = 1 and
/// overlap_r = 0; which_way requires presence_c = 1. Violations throw
/// std::invalid_argument naming the offending parameter.
std::pair<LocationOutcome, DetectorOutcome> measure_conditional(
    double x, const ExperimentConfig& cfg, Basis basis, Splitmix64& rng);

/// Full run: n events with positions, per-event basis choice, and coincidence
/// outcomes, each drawn from independent substreams of `seed`, so position
/// statistics are unchanged by the policy. With task_count > 1 the index
/// range is partitioned across std::async tasks; the merged output is
/// identical to the single-task output.
std::vector<DetectionEvent> run_experiment(const ExperimentConfig& cfg, std::size_t n,
                                           const BasisPolicy& policy, std::uint64_t seed,
                                           unsigned task_count = 1);

struct SubensembleKey {
    Basis basis;
    LocationOutcome location_outcome;
    DetectorOutcome detector_outcome;

    auto operator<=>(const SubensembleKey&) const = default;
};

/// Partition of the events' screen positions by (basis, outcome pair).
/// Every event lands in exactly one list.
std::map<SubensembleKey, std::vector<double>> sort_subensembles(
    std::span<const DetectionEvent> events);

} // namespace duality

#endif

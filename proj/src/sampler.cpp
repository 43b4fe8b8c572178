#include "duality/sampler.hpp"

#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

namespace duality {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Acceptance-rate watchdog, windowed over consecutive proposals.
struct RateGuard {
    std::uint64_t proposals = 0;
    std::uint64_t accepts = 0;

    void tally(bool accepted) {
        ++proposals;
        accepts += accepted ? 1u : 0u;
        if (proposals == 100000) {
            if (accepts < 100) {
                throw std::runtime_error(
                    "rejection sampler: acceptance rate below 1e-3 over 1e5 proposals; "
                    "envelope bound violated (internal bug)");
            }
            proposals = 0;
            accepts = 0;
        }
    }
};

struct BranchWeights {
    double y1; // |amp_Y1|^2
    double y0; // |amp_Y0|^2
    double n0; // |amp_N0|^2
    double gp_sq;
    double gm_sq;

    double rho() const { return y1 + y0 + n0; }
    double proposal() const { return gp_sq + gm_sq; }
};

// Born weights at x; the detector frame convention comes from DetectorQubit,
// precomputed by the caller along with PropagationState.
BranchWeights branch_weights(double x, const ExperimentConfig& cfg,
                             const PropagationState& prop, const DetectorQubit& qubit) {
    const complexd gp = gaussian_mode(x, Slit::a, cfg, prop);
    const complexd gm = gaussian_mode(x, Slit::b, cfg, prop);
    const double c = cfg.presence_c;
    BranchWeights w;
    w.y1 = c * std::norm(qubit.d1[1] * gp);
    w.y0 = c * std::norm(qubit.d1[0] * gp + gm);
    w.n0 = (1.0 - c) * std::norm(gp + gm);
    w.gp_sq = std::norm(gp);
    w.gm_sq = std::norm(gm);
    return w;
}

double sample_one_position(const ExperimentConfig& cfg, const PropagationState& prop,
                           const DetectorQubit& qubit, Splitmix64& rng, RateGuard& guard) {
    const double sigma = std::sqrt(prop.sigma_sq);
    const double half_d = 0.5 * cfg.slit_separation_d;
    for (std::uint64_t attempt = 0; attempt < 1000000; ++attempt) {
        const double center = rng.uniform() < 0.5 ? half_d : -half_d;
        // Box-Muller, fully specified for cross-platform reproducibility
        const double u1 = rng.uniform_pos();
        const double u2 = rng.uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
        const double x = center + sigma * z;

        const BranchWeights w = branch_weights(x, cfg, prop, qubit);
        // ratio = rho / (M q N^2) with M = 2/N^2: plain rho / 2q
        const bool accept = rng.uniform() * 2.0 * w.proposal() < w.rho();
        guard.tally(accept);
        if (accept) {
            return x;
        }
    }
    throw std::runtime_error("rejection sampler: no acceptance in 1e6 proposals");
}

Basis draw_basis(const BasisPolicy& policy, Splitmix64& rng) {
    const double u = rng.uniform();
    double cum = 0.0;
    for (const auto& [basis, p] : policy.choices) {
        cum += p;
        if (u < cum) {
            return basis;
        }
    }
    return policy.choices.back().first; // u landed on accumulated rounding slack
}

void require_param(bool ok, const char* basis, const char* param, double value,
                   const char* expected) {
    if (!ok) {
        std::ostringstream msg;
        msg << basis << " basis requires " << param << " = " << expected << ", got "
            << value;
        throw std::invalid_argument(msg.str());
    }
}

void require_support(double total_weight, double x) {
    if (!(total_weight > 0.0)) {
        std::ostringstream msg;
        msg << "measure_conditional: x = " << x << " lies outside the wavefunction support";
        throw std::invalid_argument(msg.str());
    }
}

std::vector<DetectionEvent> generate_range(const ExperimentConfig& cfg,
                                           std::uint64_t begin, std::uint64_t end,
                                           const BasisPolicy& policy,
                                           std::uint64_t seed) {
    const PropagationState prop = PropagationState::from(cfg);
    const DetectorQubit qubit = DetectorQubit::from(cfg);
    RateGuard guard;
    std::vector<DetectionEvent> events;
    events.reserve(end - begin);
    for (std::uint64_t i = begin; i < end; ++i) {
        Splitmix64 pos_rng = event_stream({seed, kPositionStream}, i);
        Splitmix64 basis_rng = event_stream({seed, kBasisStream}, i);
        Splitmix64 out_rng = event_stream({seed, kOutcomeStream}, i);

        DetectionEvent ev;
        ev.index = i;
        ev.x = sample_one_position(cfg, prop, qubit, pos_rng, guard);
        ev.basis = draw_basis(policy, basis_rng);
        std::tie(ev.location_outcome, ev.detector_outcome) =
            measure_conditional(ev.x, cfg, ev.basis, out_rng);
        events.push_back(ev);
    }
    return events;
}

} // namespace

void BasisPolicy::validate() const {
    if (choices.empty()) {
        throw std::invalid_argument("basis policy: no choices given");
    }
    double sum = 0.0;
    for (const auto& [basis, p] : choices) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("basis policy: negative probability");
        }
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "basis policy: probabilities sum to " << sum << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
}

std::vector<double> sample_positions(const ExperimentConfig& cfg, std::size_t n,
                                     const RngStreamSpec& rng) {
    const PropagationState prop = PropagationState::from(cfg);
    const DetectorQubit qubit = DetectorQubit::from(cfg);
    RateGuard guard;
    std::vector<double> xs;
    xs.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Splitmix64 stream = event_stream(rng, i);
        xs.push_back(sample_one_position(cfg, prop, qubit, stream, guard));
    }
    return xs;
}

std::pair<LocationOutcome, DetectorOutcome> measure_conditional(
    double x, const ExperimentConfig& cfg, Basis basis, Splitmix64& rng) {
    switch (basis) {
    case Basis::none:
        return {LocationOutcome::unmeasured, DetectorOutcome::unmeasured};

    case Basis::location: {
        const BranchWeights w =
            branch_weights(x, cfg, PropagationState::from(cfg), DetectorQubit::from(cfg));
        require_support(w.rho(), x);
        const double p_y = (w.y1 + w.y0) / w.rho();
        const bool in_y = rng.uniform() < p_y;
        return {in_y ? LocationOutcome::y : LocationOutcome::n,
                DetectorOutcome::unmeasured};
    }

    case Basis::location_then_which_way: {
        const BranchWeights w =
            branch_weights(x, cfg, PropagationState::from(cfg), DetectorQubit::from(cfg));
        require_support(w.rho(), x);
        const double p_y = (w.y1 + w.y0) / w.rho();
        if (rng.uniform() >= p_y) {
            // frame measurement happens only inside the Y branch
            return {LocationOutcome::n, DetectorOutcome::unmeasured};
        }
        const double p_f1 = w.y1 / (w.y1 + w.y0);
        const bool f1 = rng.uniform() < p_f1;
        return {LocationOutcome::y,
                f1 ? DetectorOutcome::frame1 : DetectorOutcome::frame0};
    }

    case Basis::which_way: {
        require_param(cfg.presence_c == 1.0, "which_way", "presence_c",
                      cfg.presence_c, "1");
        const BranchWeights w =
            branch_weights(x, cfg, PropagationState::from(cfg), DetectorQubit::from(cfg));
        require_support(w.rho(), x);
        const double p_f1 = w.y1 / w.rho();
        const bool f1 = rng.uniform() < p_f1;
        return {LocationOutcome::unmeasured,
                f1 ? DetectorOutcome::frame1 : DetectorOutcome::frame0};
    }

    case Basis::eraser: {
        require_param(cfg.presence_c == 1.0, "eraser", "presence_c", cfg.presence_c,
                      "1");
        require_param(cfg.overlap_r == 0.0, "eraser", "overlap_r", cfg.overlap_r,
                      "0");
        // State is (d1 g+ + d2 g-)/N; project on d+- = (d1 +- d2)/sqrt(2).
        const PropagationState prop = PropagationState::from(cfg);
        const complexd gp = gaussian_mode(x, Slit::a, cfg, prop);
        const complexd gm = gaussian_mode(x, Slit::b, cfg, prop);
        const double plus_sq = 0.5 * std::norm(gp + gm);
        const double minus_sq = 0.5 * std::norm(gp - gm);
        require_support(plus_sq + minus_sq, x);
        const bool plus = rng.uniform() < plus_sq / (plus_sq + minus_sq);
        return {LocationOutcome::unmeasured,
                plus ? DetectorOutcome::plus : DetectorOutcome::minus};
    }
    }
    throw std::logic_error("measure_conditional: unknown basis");
}

std::vector<DetectionEvent> run_experiment(const ExperimentConfig& cfg, std::size_t n,
                                           const BasisPolicy& policy, std::uint64_t seed,
                                           unsigned task_count) {
    policy.validate();
    if (task_count <= 1 || n < 2) {
        return generate_range(cfg, 0, n, policy, seed);
    }
    const std::uint64_t chunk = (n + task_count - 1) / task_count;
    std::vector<std::future<std::vector<DetectionEvent>>> futures;
    for (std::uint64_t begin = 0; begin < n; begin += chunk) {
        const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, n);
        futures.push_back(std::async(std::launch::async, [=, &cfg, &policy] {
            return generate_range(cfg, begin, end, policy, seed);
        }));
    }
    std::vector<DetectionEvent> events;
    events.reserve(n);
    for (auto& f : futures) {
        auto part = f.get();
        events.insert(events.end(), part.begin(), part.end());
    }
    return events;
}

std::map<SubensembleKey, std::vector<double>> sort_subensembles(
    std::span<const DetectionEvent> events) {
    std::map<SubensembleKey, std::vector<double>> out;
    for (const DetectionEvent& ev : events) {
        out[{ev.basis, ev.location_outcome, ev.detector_outcome}].push_back(ev.x);
    }
    return out;
}

} // namespace duality

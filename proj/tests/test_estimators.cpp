#include <doctest.h>

#include <cmath>
#include <random>

#include "duality/estimators.hpp"
#include "duality/quadrature.hpp"
#include "duality/sampler.hpp"

#include "test_util.hpp"

using namespace duality;
using testutil::reference_config;

namespace {

constexpr double kPi = 3.141592653589793238462643;

PatternSamples analytic_pattern(const ExperimentConfig& cfg, std::size_t points = 801) {
    const double w = fringe_width(cfg);
    return sample_pattern(cfg, -4.0 * w, 4.0 * w, points);
}

} // namespace

TEST_CASE("histogram binning") {
    SUBCASE("empty input gives all-zero counts") {
        const Histogram h = histogram(std::vector<double>{}, -1.0, 1.0, 10);
        CHECK(h.total() == 0);
        for (auto c : h.counts) {
            CHECK(c == 0);
        }
    }

    SUBCASE("boundary placement: half-open bins, closed top edge") {
        // exactly representable edges: width 0.125
        std::vector<double> xs{0.0, 0.125, 0.5, 1.0, 1.0000001, -0.1};
        const Histogram h = histogram(xs, 0.0, 1.0, 8);
        CHECK(h.counts[0] == 1); // lo lands in bin 0
        CHECK(h.counts[1] == 1); // left edge of bin 1 belongs to bin 1
        CHECK(h.counts[4] == 1);
        CHECK(h.counts[7] == 1); // x == hi goes to the last bin
        CHECK(h.overflow == 1);
        CHECK(h.underflow == 1);
        CHECK(h.total_in_range() == 4);
    }

    SUBCASE("uniform draws spread evenly") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<double> xs(1000000);
        for (double& x : xs) {
            x = uni(rng);
        }
        const std::size_t bins = 50;
        const Histogram h = histogram(xs, 0.0, 1.0, bins);
        const double expected = static_cast<double>(xs.size()) / bins;
        const double five_sigma = 5.0 * std::sqrt(expected);
        for (auto c : h.counts) {
            CHECK(std::fabs(static_cast<double>(c) - expected) < five_sigma);
        }
        CHECK(h.total_in_range() == xs.size());
    }

    SUBCASE("invalid construction") {
        CHECK_THROWS_AS(histogram(std::vector<double>{}, 1.0, -1.0, 10),
                        std::invalid_argument);
        CHECK_THROWS_AS(histogram(std::vector<double>{}, 0.0, 1.0, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("visibility estimate on analytic patterns hits the bound") {
    ExperimentConfig cfg = reference_config();

    SUBCASE("fully coherent: V = 1") {
        cfg.presence_c = 0.0;
        const FringeStats stats = estimate_visibility(analytic_pattern(cfg), cfg);
        CHECK(std::fabs(stats.visibility - 1.0) <= 1e-4);
        CHECK(std::fabs(stats.phase) <= 1e-6);
        CHECK(stats.n_events == 0);
    }

    SUBCASE("no cosine term: V = 0") {
        cfg.presence_c = 1.0;
        cfg.overlap_r = 0.0;
        const FringeStats stats = estimate_visibility(analytic_pattern(cfg), cfg);
        CHECK(stats.visibility <= 1e-6);
    }

    SUBCASE("half-present half-overlapping detector: V = 0.75") {
        cfg.presence_c = 0.5;
        cfg.overlap_r = 0.5;
        const FringeStats stats = estimate_visibility(analytic_pattern(cfg), cfg);
        CHECK(std::fabs(stats.visibility - 0.75) <= 1e-3);
    }

    SUBCASE("consistency across theta = 0 configs with d >= 6 eps") {
        std::mt19937_64 rng(314159);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int trial = 0; trial < 12; ++trial) {
            cfg = reference_config();
            cfg.slit_separation_d = 0.7 + uni(rng);
            cfg.slit_width_epsilon = cfg.slit_separation_d / (6.5 + 6.0 * uni(rng));
            cfg.presence_c = uni(rng);
            cfg.overlap_r = uni(rng);
            CAPTURE(cfg.presence_c);
            CAPTURE(cfg.overlap_r);
            const FringeStats stats = estimate_visibility(analytic_pattern(cfg), cfg);
            CHECK(std::fabs(stats.visibility - analytic_visibility_at(0.0, cfg)) <= 1e-3);
            CHECK(stats.visibility <= 1.0);
            if (visibility_bound(cfg) < 0.99) {
                CHECK(stats.visibility < 1.0); // the clamp never fires on analytic input
            }
            CHECK(stats.fit_rms < 1e-6);
        }
    }

    SUBCASE("free-frequency refit recovers the fringe width") {
        cfg.presence_c = 0.0;
        const FringeStats stats = estimate_visibility(analytic_pattern(cfg), cfg);
        CHECK(std::fabs(stats.fringe_width_est - fringe_width(cfg)) / fringe_width(cfg) <
              0.01);
    }

    SUBCASE("theta != 0: fitted V is |1 - c + c r e^{i theta}|") {
        cfg.presence_c = 0.6;
        cfg.overlap_r = 0.7;
        cfg.overlap_phase_theta = 2.0 * kPi / 3.0;
        const double expected = std::abs(std::complex<double>(
            1.0 - 0.6 + 0.6 * 0.7 * std::cos(cfg.overlap_phase_theta),
            0.6 * 0.7 * std::sin(cfg.overlap_phase_theta)));
        const FringeStats stats = estimate_visibility(analytic_pattern(cfg), cfg);
        CHECK(std::fabs(stats.visibility - expected) <= 1e-3);
    }
}

TEST_CASE("visibility estimate error paths") {
    ExperimentConfig cfg = reference_config();
    cfg.presence_c = 0.0;
    const double w = fringe_width(cfg);

    SUBCASE("insufficient span") {
        const PatternSamples narrow = sample_pattern(cfg, -w, w, 101);
        CHECK_THROWS_AS(estimate_visibility(narrow, cfg), std::invalid_argument);
    }

    SUBCASE("off-center span") {
        const PatternSamples shifted = sample_pattern(cfg, 0.5 * w, 5.0 * w, 301);
        CHECK_THROWS_AS(estimate_visibility(shifted, cfg), std::invalid_argument);
    }

    SUBCASE("cosh attenuation overflow in the deep near field") {
        ExperimentConfig near = cfg;
        near.screen_distance_L = 0.1;
        const double wn = fringe_width(near);
        const PatternSamples p = sample_pattern(near, -4.0 * wn, 4.0 * wn, 301);
        CHECK_THROWS_AS(estimate_visibility(p, near), std::runtime_error);
    }

    SUBCASE("empty histogram") {
        Histogram h;
        h.lo = -4.0 * w;
        h.hi = 4.0 * w;
        h.bin_count = 100;
        h.counts.assign(100, 0);
        CHECK_THROWS_AS(estimate_visibility(h, cfg), std::invalid_argument);
    }
}

TEST_CASE("phase shift wrapping") {
    FringeStats a;
    FringeStats b;
    a.phase = 0.0;
    b.phase = 0.0;
    CHECK(phase_shift(a, b) == 0.0);

    a.phase = 3.0;
    b.phase = -3.0;
    CHECK(phase_shift(a, b) == doctest::Approx(6.0 - 2.0 * kPi).epsilon(1e-12));

    a.phase = -3.0;
    b.phase = 3.0;
    CHECK(phase_shift(a, b) == doctest::Approx(2.0 * kPi - 6.0).epsilon(1e-12));

    a.phase = kPi;
    b.phase = 0.0;
    CHECK(phase_shift(a, b) == doctest::Approx(kPi).epsilon(1e-12)); // pi stays pi
}

TEST_CASE("Monte Carlo visibility converges to the analytic value") {
    ExperimentConfig cfg = reference_config();
    cfg.presence_c = 0.0;
    const double w = fringe_width(cfg);

    double previous_error = 1e9;
    for (std::size_t n : {std::size_t{10000}, std::size_t{100000}, std::size_t{1000000}}) {
        const std::vector<double> xs = sample_positions(cfg, n, {42, kPositionStream});
        const Histogram h = histogram(xs, -4.0 * w, 4.0 * w, 200);
        const FringeStats stats = estimate_visibility(h, cfg);
        const double error = std::fabs(stats.visibility - 1.0);
        CAPTURE(n);
        CHECK(error < previous_error + 0.01); // shrinks up to noise
        previous_error = error;
        if (n == 1000000) {
            CHECK(error < 0.02);
            CHECK(stats.n_events == n);
        }
    }
}

TEST_CASE("eraser subensembles: pi-shifted fringes, incoherent pool") {
    ExperimentConfig cfg = reference_config();
    cfg.presence_c = 1.0;
    cfg.overlap_r = 0.0;
    const std::size_t n = 100000;
    const std::vector<DetectionEvent> events =
        run_experiment(cfg, n, BasisPolicy::fixed(Basis::eraser), 7);

    const double w = fringe_width(cfg);
    std::vector<double> xs_plus;
    std::vector<double> xs_minus;
    std::vector<double> xs_all;
    for (const DetectionEvent& ev : events) {
        (ev.detector_outcome == DetectorOutcome::plus ? xs_plus : xs_minus).push_back(ev.x);
        xs_all.push_back(ev.x);
    }
    REQUIRE(xs_plus.size() + xs_minus.size() == n);

    const FringeStats plus =
        estimate_visibility(histogram(xs_plus, -4.0 * w, 4.0 * w, 200), cfg);
    const FringeStats minus =
        estimate_visibility(histogram(xs_minus, -4.0 * w, 4.0 * w, 200), cfg);
    const FringeStats pooled =
        estimate_visibility(histogram(xs_all, -4.0 * w, 4.0 * w, 200), cfg);

    CHECK(plus.visibility > 0.9);
    CHECK(minus.visibility > 0.9);
    CHECK(std::fabs(phase_shift(plus, minus)) > kPi - 0.15);
    CHECK(pooled.visibility <= 0.05);
}

TEST_CASE("duality report on location-sorted runs") {
    ExperimentConfig cfg = reference_config();

    SUBCASE("c = 0: everything lands in the interference-bearing N subensemble") {
        cfg.presence_c = 0.0;
        const std::vector<DetectionEvent> events =
            run_experiment(cfg, 50000, BasisPolicy::fixed(Basis::location), 11);
        const DualityReport report = duality_report(events, cfg);
        CHECK(report.y_fraction == 0.0);
        REQUIRE(report.v_subensemble_n.has_value());
        CHECK(std::fabs(report.v_subensemble_n->visibility - 1.0) <= 0.03);
        CHECK(!report.v_subensemble_y.has_value());
        CHECK(report.flags.size() == 1); // empty Y flagged, not fatal
        CHECK(report.sum_check == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("c = 1, r = 0: empty N subensemble flagged, Y shows no fringes") {
        cfg.presence_c = 1.0;
        cfg.overlap_r = 0.0;
        const std::vector<DetectionEvent> events =
            run_experiment(cfg, 50000, BasisPolicy::fixed(Basis::location), 12);
        const DualityReport report = duality_report(events, cfg);
        CHECK(report.y_fraction == 1.0);
        REQUIRE(report.v_subensemble_y.has_value());
        CHECK(report.v_subensemble_y->visibility <= 0.05);
        CHECK(!report.v_subensemble_n.has_value());
        REQUIRE(report.flags.size() == 1);
        CHECK(report.flags[0].find("N-subensemble-empty") != std::string::npos);
    }

    SUBCASE("rejects non-location runs") {
        cfg.presence_c = 1.0;
        cfg.overlap_r = 0.0;
        const std::vector<DetectionEvent> events =
            run_experiment(cfg, 100, BasisPolicy::fixed(Basis::eraser), 13);
        CHECK_THROWS_AS(duality_report(events, cfg), std::invalid_argument);
    }
}

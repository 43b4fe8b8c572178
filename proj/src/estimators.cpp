#include "duality/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace duality {

namespace {

constexpr double kPi = 3.141592653589793238462643;

struct FitInput {
    std::vector<double> xs;      // abscissae inside the fit window
    std::vector<double> ys;      // envelope-normalized densities
    std::vector<double> weights; // least-squares weights
    std::uint64_t n_events = 0;
};

struct LinearFit {
    double b0 = 0.0; // background scale
    double a = 0.0;  // cos coefficient
    double b = 0.0;  // sin coefficient
    double sse = 0.0;
};

// Weighted normal equations for y*cosh = b0*cosh + a*cos(kx) + b*sin(kx).
LinearFit solve_linear(const FitInput& in, double k, double kappa) {
    double m[3][3] = {};
    double rhs[3] = {};
    for (std::size_t i = 0; i < in.xs.size(); ++i) {
        const double x = in.xs[i];
        const double ch = std::cosh(kappa * x);
        const double basis[3] = {ch, std::cos(k * x), std::sin(k * x)};
        const double target = in.ys[i] * ch;
        const double w = in.weights[i];
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) {
                m[p][q] += w * basis[p] * basis[q];
            }
            rhs[p] += w * basis[p] * target;
        }
    }
    // 3x3 Gaussian elimination with partial pivoting
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::fabs(m[piv[row]][col]) > std::fabs(m[piv[best]][col])) {
                best = row;
            }
        }
        std::swap(piv[col], piv[best]);
        const double pivot = m[piv[col]][col];
        if (std::fabs(pivot) < 1e-300) {
            throw std::runtime_error("visibility fit: singular normal equations");
        }
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[piv[row]][col] / pivot;
            for (int q = col; q < 3; ++q) {
                m[piv[row]][q] -= f * m[piv[col]][q];
            }
            rhs[piv[row]] -= f * rhs[piv[col]];
        }
    }
    double sol[3];
    for (int col = 2; col >= 0; --col) {
        double acc = rhs[piv[col]];
        for (int q = col + 1; q < 3; ++q) {
            acc -= m[piv[col]][q] * sol[q];
        }
        sol[col] = acc / m[piv[col]][col];
    }

    LinearFit fit;
    fit.b0 = sol[0];
    fit.a = sol[1];
    fit.b = sol[2];
    for (std::size_t i = 0; i < in.xs.size(); ++i) {
        const double x = in.xs[i];
        const double ch = std::cosh(kappa * x);
        const double model = fit.b0 * ch + fit.a * std::cos(k * x) + fit.b * std::sin(k * x);
        const double r = (in.ys[i] * ch - model) / ch; // residual in normalized units
        fit.sse += in.weights[i] * r * r;
    }
    return fit;
}

FringeStats fit_fringe(const FitInput& in, const ExperimentConfig& cfg) {
    if (in.xs.size() < 8) {
        throw std::runtime_error("visibility fit: too few usable points in window");
    }
    const double w = fringe_width(cfg);
    const double k0 = 2.0 * kPi / w;
    const double kappa = cfg.slit_separation_d / (2.0 * sigma_t_sq(cfg));

    const LinearFit primary = solve_linear(in, k0, kappa);
    if (!(primary.b0 > 0.0) || !std::isfinite(primary.b0)) {
        throw std::runtime_error("visibility fit: nonpositive background scale");
    }

    FringeStats stats;
    const double raw_v = std::hypot(primary.a, primary.b) / primary.b0;
    stats.visibility = std::clamp(raw_v, 0.0, 1.0);
    stats.phase = std::atan2(-primary.b, primary.a);
    const double wsum = std::accumulate(in.weights.begin(), in.weights.end(), 0.0);
    stats.fit_rms = wsum > 0.0 ? std::sqrt(primary.sse / wsum) : 0.0;
    stats.n_events = in.n_events;

    // secondary free-frequency fit: golden-section on k against the SSE
    const double gr = 0.6180339887498949;
    double lo = 0.6 * k0;
    double hi = 1.4 * k0;
    double k1 = hi - gr * (hi - lo);
    double k2 = lo + gr * (hi - lo);
    double f1 = solve_linear(in, k1, kappa).sse;
    double f2 = solve_linear(in, k2, kappa).sse;
    for (int iter = 0; iter < 60 && (hi - lo) > 1e-10 * k0; ++iter) {
        if (f1 < f2) {
            hi = k2;
            k2 = k1;
            f2 = f1;
            k1 = hi - gr * (hi - lo);
            f1 = solve_linear(in, k1, kappa).sse;
        } else {
            lo = k1;
            k1 = k2;
            f1 = f2;
            k2 = lo + gr * (hi - lo);
            f2 = solve_linear(in, k2, kappa).sse;
        }
    }
    stats.fringe_width_est = 2.0 * kPi / (0.5 * (lo + hi));
    return stats;
}

// Shared windowing + envelope normalization for both input kinds. Incoming
// weights are per-count Poisson weights for histograms (1/max(count,1)) and
// uniform for analytic densities; `count_scale` moves the histogram residuals
// back to count units, where the Poisson weight is the proper GLS weight.
// Without it, tail bins (tiny envelope, huge 1/E noise amplification) would
// dominate the fit variance.
FitInput build_fit_input(std::span<const double> xs, std::span<const double> densities,
                         std::span<const double> weights, double span_lo, double span_hi,
                         const ExperimentConfig& cfg, std::uint64_t n_events,
                         bool count_scale) {
    const double w = fringe_width(cfg); // throws at L = 0
    if (span_hi - span_lo < 3.0 * w || span_lo > -w || span_hi < w) {
        throw std::invalid_argument(
            "visibility fit: input must span at least 3 fringe widths centered near 0");
    }
    const PropagationState prop = PropagationState::from(cfg);
    const double norm_sq = norm_constant(cfg);
    const double a_sq = std::norm(prop.a_t);
    const double d = cfg.slit_separation_d;
    const double kappa = d / (2.0 * prop.sigma_sq);
    if (kappa * 2.0 * w > 700.0) {
        throw std::runtime_error(
            "visibility fit: cosh attenuation overflows across the fit window");
    }

    FitInput in;
    in.n_events = n_events;
    double env_max = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (std::fabs(x) > 2.0 * w) {
            continue;
        }
        // envelope E(x) = 2|A_t|^2 e^{-(x^2+d^2/4)/2s^2} cosh(kappa x)/N^2,
        // computed as the slit-hump sum, which is the same thing and finite
        const double hp = std::exp(-(x - 0.5 * d) * (x - 0.5 * d) / (2.0 * prop.sigma_sq));
        const double hm = std::exp(-(x + 0.5 * d) * (x + 0.5 * d) / (2.0 * prop.sigma_sq));
        const double envelope = a_sq * (hp + hm) / norm_sq;
        env_max = std::max(env_max, envelope);
        if (envelope < 1e-300) {
            continue;
        }
        in.xs.push_back(x);
        in.ys.push_back(densities[i] / envelope);
        double weight = weights[i];
        if (count_scale) {
            const double gauss = envelope / std::cosh(kappa * x);
            weight *= gauss * gauss;
        }
        in.weights.push_back(weight);
    }
    if (env_max < 1e-300) {
        throw std::runtime_error("visibility fit: envelope vanishes over the window");
    }
    return in;
}

} // namespace

std::uint64_t Histogram::total_in_range() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void Histogram::add(double x) {
    if (x < lo) {
        ++underflow;
        return;
    }
    if (x > hi) {
        ++overflow;
        return;
    }
    auto idx = static_cast<std::size_t>((x - lo) / bin_width());
    if (idx >= bin_count) {
        idx = bin_count - 1; // x == hi, or rounding at the top edge
    }
    ++counts[idx];
}

Histogram histogram(std::span<const double> xs, double lo, double hi,
                    std::size_t bin_count) {
    if (!(lo < hi)) {
        throw std::invalid_argument("histogram: lo must be < hi");
    }
    if (bin_count < 2) {
        throw std::invalid_argument("histogram: need at least 2 bins");
    }
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.bin_count = bin_count;
    h.counts.assign(bin_count, 0);
    for (double x : xs) {
        h.add(x);
    }
    return h;
}

FringeStats estimate_visibility(const Histogram& hist, const ExperimentConfig& cfg) {
    const std::uint64_t n = hist.total();
    if (n == 0) {
        throw std::invalid_argument("visibility fit: empty histogram");
    }
    const double bw = hist.bin_width();
    std::vector<double> xs(hist.bin_count);
    std::vector<double> dens(hist.bin_count);
    std::vector<double> wts(hist.bin_count);
    for (std::size_t i = 0; i < hist.bin_count; ++i) {
        xs[i] = hist.center(i);
        dens[i] = static_cast<double>(hist.counts[i]) / (static_cast<double>(n) * bw);
        wts[i] = 1.0 / static_cast<double>(std::max<std::uint64_t>(hist.counts[i], 1));
    }
    return fit_fringe(build_fit_input(xs, dens, wts, hist.lo, hist.hi, cfg, n, true), cfg);
}

FringeStats estimate_visibility(const PatternSamples& pattern,
                                const ExperimentConfig& cfg) {
    if (pattern.xs.empty()) {
        throw std::invalid_argument("visibility fit: empty pattern");
    }
    const std::vector<double> wts(pattern.xs.size(), 1.0);
    return fit_fringe(build_fit_input(pattern.xs, pattern.intensities, wts,
                                      pattern.xs.front(), pattern.xs.back(), cfg, 0, false),
                      cfg);
}

double phase_shift(const FringeStats& a, const FringeStats& b) {
    double delta = a.phase - b.phase;
    while (delta > kPi) {
        delta -= 2.0 * kPi;
    }
    while (delta <= -kPi) {
        delta += 2.0 * kPi;
    }
    return delta;
}

DualityReport duality_report(std::span<const DetectionEvent> events,
                             const ExperimentConfig& cfg) {
    DualityReport report;
    report.d_analytic = distinguishability(cfg);
    report.v_bound = visibility_bound(cfg);
    report.sum_check = report.v_bound + report.d_analytic;
    report.n_events = events.size();

    std::vector<double> xs_y;
    std::vector<double> xs_n;
    std::uint64_t measured = 0;
    for (const DetectionEvent& ev : events) {
        if (ev.basis != Basis::location && ev.basis != Basis::location_then_which_way) {
            throw std::invalid_argument(
                "duality_report requires events from a location-sorted run");
        }
        ++measured;
        if (ev.location_outcome == LocationOutcome::y) {
            xs_y.push_back(ev.x);
        } else {
            xs_n.push_back(ev.x);
        }
    }
    report.y_fraction =
        measured > 0 ? static_cast<double>(xs_y.size()) / static_cast<double>(measured)
                     : 0.0;

    const double w = fringe_width(cfg);
    auto fit_subensemble = [&](const std::vector<double>& xs, const char* name)
        -> std::optional<FringeStats> {
        if (xs.empty()) {
            report.flags.push_back(std::string(name) + "-subensemble-empty");
            return std::nullopt;
        }
        try {
            return estimate_visibility(histogram(xs, -4.0 * w, 4.0 * w, 200), cfg);
        } catch (const std::exception& e) {
            report.flags.push_back(std::string(name) + "-subensemble-fit-failed: " +
                                   e.what());
            return std::nullopt;
        }
    };
    report.v_subensemble_y = fit_subensemble(xs_y, "Y");
    report.v_subensemble_n = fit_subensemble(xs_n, "N");
    return report;
}

} // namespace duality

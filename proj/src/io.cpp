#include "duality/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace duality {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string basis_name(Basis b) {
    switch (b) {
    case Basis::which_way: return "whichway";
    case Basis::eraser: return "eraser";
    case Basis::location: return "location";
    case Basis::location_then_which_way: return "location-whichway";
    case Basis::none: return "none";
    }
    throw std::logic_error("basis_name: unknown basis");
}

Basis basis_from_name(const std::string& name) {
    if (name == "whichway") return Basis::which_way;
    if (name == "eraser") return Basis::eraser;
    if (name == "location") return Basis::location;
    if (name == "location-whichway") return Basis::location_then_which_way;
    if (name == "none") return Basis::none;
    throw std::invalid_argument("unknown basis name: " + name);
}

std::string location_outcome_code(LocationOutcome o) {
    switch (o) {
    case LocationOutcome::y: return "Y";
    case LocationOutcome::n: return "N";
    case LocationOutcome::unmeasured: return "U";
    }
    throw std::logic_error("location_outcome_code: unknown outcome");
}

std::string detector_outcome_code(DetectorOutcome o) {
    switch (o) {
    case DetectorOutcome::frame0: return "F0";
    case DetectorOutcome::frame1: return "F1";
    case DetectorOutcome::plus: return "+";
    case DetectorOutcome::minus: return "-";
    case DetectorOutcome::unmeasured: return "U";
    }
    throw std::logic_error("detector_outcome_code: unknown outcome");
}

void write_pattern_csv(std::ostream& os, const PatternSamples& pattern) {
    const bool theta_zero = pattern.config.overlap_phase_theta == 0.0;
    os << "x,intensity";
    if (theta_zero) {
        os << ",intensity_closed_form";
    }
    os << "\n";
    for (std::size_t i = 0; i < pattern.xs.size(); ++i) {
        os << format_g17(pattern.xs[i]) << ',' << format_g17(pattern.intensities[i]);
        if (theta_zero) {
            os << ','
               << format_g17(intensity_closed_form_theta0(pattern.xs[i], pattern.config));
        }
        os << "\n";
    }
}

void write_sweep_csv(std::ostream& os, std::span<const DualityRow> rows) {
    os << "c,r,theta,D,V_bound,V_measured,sum_bound,sum_measured,status\n";
    for (const DualityRow& row : rows) {
        os << format_g17(row.c) << ',' << format_g17(row.r) << ',' << format_g17(row.theta)
           << ',' << format_g17(row.dist) << ',' << format_g17(row.v_bound) << ','
           << format_g17(row.v_measured) << ',' << format_g17(row.sum_bound) << ','
           << format_g17(row.sum_measured) << ',' << row.status << "\n";
    }
}

void write_events_csv(std::ostream& os, std::span<const DetectionEvent> events) {
    os << "index,x,basis,location_outcome,detector_outcome\n";
    for (const DetectionEvent& ev : events) {
        os << ev.index << ',' << format_g17(ev.x) << ',' << basis_name(ev.basis) << ','
           << location_outcome_code(ev.location_outcome) << ','
           << detector_outcome_code(ev.detector_outcome) << "\n";
    }
}

void write_eraser_csv(std::ostream& os, const Histogram& plus, const Histogram& minus) {
    if (plus.bin_count != minus.bin_count || plus.lo != minus.lo || plus.hi != minus.hi) {
        throw std::invalid_argument("eraser CSV: plus/minus histograms must share binning");
    }
    os << "bin_center,count_plus,count_minus,count_total\n";
    for (std::size_t i = 0; i < plus.bin_count; ++i) {
        os << format_g17(plus.center(i)) << ',' << plus.counts[i] << ',' << minus.counts[i]
           << ',' << (plus.counts[i] + minus.counts[i]) << "\n";
    }
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    return nlohmann::json{
        {"d", cfg.slit_separation_d},      {"epsilon", cfg.slit_width_epsilon},
        {"wavelength", cfg.wavelength},    {"L", cfg.screen_distance_L},
        {"c", cfg.presence_c},             {"overlap_r", cfg.overlap_r},
        {"theta", cfg.overlap_phase_theta}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    const nlohmann::json& obj = j.contains("config") ? j.at("config") : j;
    if (!obj.is_object()) {
        throw std::invalid_argument("config JSON must be an object");
    }
    static const char* known[] = {"d", "epsilon", "wavelength", "L",
                                  "c", "overlap_r", "theta", "seed"};
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : known) {
            ok = ok || it.key() == key;
        }
        if (!ok) {
            throw std::invalid_argument("unknown config key: " + it.key());
        }
    }
    ExperimentConfig cfg;
    cfg.slit_separation_d = obj.value("d", cfg.slit_separation_d);
    cfg.slit_width_epsilon = obj.value("epsilon", cfg.slit_width_epsilon);
    cfg.wavelength = obj.value("wavelength", cfg.wavelength);
    cfg.screen_distance_L = obj.value("L", cfg.screen_distance_L);
    cfg.presence_c = obj.value("c", cfg.presence_c);
    cfg.overlap_r = obj.value("overlap_r", cfg.overlap_r);
    cfg.overlap_phase_theta = obj.value("theta", cfg.overlap_phase_theta);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path);
    }
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

nlohmann::json make_manifest(const ExperimentConfig& cfg, std::uint64_t seed,
                             const std::string& subcommand,
                             const nlohmann::json& params) {
    nlohmann::json m;
    m["tool"] = "dualitylab";
    m["version"] = kToolVersion;
    m["subcommand"] = subcommand;
    m["config"] = config_to_json(cfg);
    m["config"]["seed"] = seed;
    m["params"] = params;

    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    m["timestamp"] = stamp;

    nlohmann::json derived;
    derived["beta"] = beta(cfg);
    derived["sigma_t_sq"] = sigma_t_sq(cfg);
    derived["norm_sq"] = norm_constant(cfg);
    derived["distinguishability"] = distinguishability(cfg);
    derived["visibility_bound"] = visibility_bound(cfg);
    if (cfg.screen_distance_L > 0.0) {
        derived["fringe_width"] = fringe_width(cfg);
    } else {
        derived["fringe_width"] = nullptr;
    }
    m["derived"] = derived;

    m["notes"] = nlohmann::json::array(
        {"eraser d+- states normalized with 1/sqrt(2)",
         "visibility estimation: envelope-normalized least-squares fringe fit, "
         "central window, fixed fringe frequency"});
    if (cfg.slit_overlap_warning()) {
        m["warnings"] = nlohmann::json::array(
            {"d < 4 epsilon: slit modes overlap strongly"});
    }
    return m;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

} // namespace duality

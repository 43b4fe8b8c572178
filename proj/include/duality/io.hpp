#ifndef DUALITY_IO_HPP
#define DUALITY_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "duality/analytics.hpp"
#include "duality/config.hpp"
#include "duality/estimators.hpp"
#include "duality/sampler.hpp"

namespace duality {

/// Shortest representation that round-trips a double exactly (17 significant
/// digits), "C"-locale decimal point.
std::string format_g17(double v);

std::string basis_name(Basis b);
Basis basis_from_name(const std::string& name);
std::string location_outcome_code(LocationOutcome o); // Y, N, U
std::string detector_outcome_code(DetectorOutcome o); // F0, F1, +, -, U

/// CSV columns x,intensity and, for theta = 0 configs, the redundant
/// intensity_closed_form column evaluated by the independent product form.
void write_pattern_csv(std::ostream& os, const PatternSamples& pattern);

void write_sweep_csv(std::ostream& os, std::span<const DualityRow> rows);

/// CSV columns index,x,basis,location_outcome,detector_outcome.
void write_events_csv(std::ostream& os, std::span<const DetectionEvent> events);

/// Per-bin plus/minus/total counts of an eraser run.
void write_eraser_csv(std::ostream& os, const Histogram& plus, const Histogram& minus);

/// Config JSON keys: d, epsilon, wavelength, L, c, overlap_r, theta, seed.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Accepts either a bare config object or a manifest (object with a "config"
/// key); unknown keys are rejected so typos cannot silently revert defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config_file(const std::string& path);

/// Reproducibility record written next to every output: config echo, seed,
/// subcommand, resolved run parameters, tool version, timestamp, and derived
/// quantities. Feeding the manifest back through --config reproduces the
/// outputs bit for bit (timestamp excluded).
nlohmann::json make_manifest(const ExperimentConfig& cfg, std::uint64_t seed,
                             const std::string& subcommand,
                             const nlohmann::json& params = nlohmann::json::object());

void write_text_file(const std::string& path, const std::string& content);

} // namespace duality

#endif

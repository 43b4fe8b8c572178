// dualitylab: command-line laboratory for a two-slit experiment whose
// which-way detector is in a quantum superposition of present and absent.
// Subcommands evaluate analytic patterns, duality sweeps, Monte Carlo
// event samples, and the random quantum eraser, emitting CSV plus a JSON
// manifest that reproduces every output bit for bit.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "duality/analytics.hpp"
#include "duality/core_model.hpp"
#include "duality/estimators.hpp"
#include "duality/io.hpp"
#include "duality/sampler.hpp"

namespace {

using namespace duality;

struct ConfigCli {
    std::string config_path;
    std::optional<double> d, epsilon, wavelength, length, c, overlap_r, theta;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (or a manifest)");
        cmd->add_option("--d", d, "slit separation");
        cmd->add_option("--epsilon", epsilon, "slit width");
        cmd->add_option("--wavelength", wavelength, "de Broglie wavelength");
        cmd->add_option("--L", length, "screen distance");
        cmd->add_option("--c", c, "detector presence weight in [0,1]");
        cmd->add_option("--overlap-r", overlap_r, "detector state overlap |<d1|d2>| in [0,1]");
        cmd->add_option("--theta", theta, "overlap phase in (-pi, pi]");
        cmd->add_option("--seed", seed, "master RNG seed");
    }

    struct Resolved {
        ExperimentConfig cfg;
        std::uint64_t seed = 0;
        // run parameters recorded by a matching manifest, used as defaults
        nlohmann::json params = nlohmann::json::object();
    };

    // config file first, then flag overrides
    Resolved resolve(const std::string& subcommand) const {
        Resolved run;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw std::invalid_argument("cannot open config file: " + config_path);
            }
            nlohmann::json j;
            in >> j;
            run.cfg = config_from_json(j);
            const nlohmann::json& obj = j.contains("config") ? j.at("config") : j;
            if (obj.contains("seed")) {
                run.seed = obj.at("seed").get<std::uint64_t>();
            }
            if (j.contains("params") && j.value("subcommand", "") == subcommand) {
                run.params = j.at("params");
            }
        }
        if (d) run.cfg.slit_separation_d = *d;
        if (epsilon) run.cfg.slit_width_epsilon = *epsilon;
        if (wavelength) run.cfg.wavelength = *wavelength;
        if (length) run.cfg.screen_distance_L = *length;
        if (c) run.cfg.presence_c = *c;
        if (overlap_r) run.cfg.overlap_r = *overlap_r;
        if (theta) run.cfg.overlap_phase_theta = *theta;
        if (seed) run.seed = *seed;
        run.cfg.validate();
        if (run.cfg.slit_overlap_warning()) {
            std::cerr << "warning: d < 4*epsilon, slit modes overlap strongly\n";
        }
        return run;
    }
};

template <class T>
T pick(const std::optional<T>& flag, const nlohmann::json& params, const char* key,
       T fallback) {
    if (flag) {
        return *flag;
    }
    return params.value(key, fallback);
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) {
            continue;
        }
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) {
            throw std::invalid_argument("bad number in value list: " + tok);
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("empty value list");
    }
    return values;
}

BasisPolicy parse_policy(const std::string& text) {
    if (text.rfind("random:", 0) != 0) {
        return BasisPolicy::fixed(basis_from_name(text));
    }
    BasisPolicy policy;
    std::stringstream ss(text.substr(7));
    std::string entry;
    while (std::getline(ss, entry, ',')) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("policy entry needs basis=prob: " + entry);
        }
        policy.choices.emplace_back(basis_from_name(entry.substr(0, eq)),
                                    std::stod(entry.substr(eq + 1)));
    }
    policy.validate();
    return policy;
}

void write_manifest(const std::string& out_path, const ExperimentConfig& cfg,
                    std::uint64_t seed, const std::string& subcommand,
                    const nlohmann::json& params) {
    const nlohmann::json manifest = make_manifest(cfg, seed, subcommand, params);
    write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

double default_half_range(const ExperimentConfig& cfg) {
    if (cfg.screen_distance_L > 0.0) {
        return 4.0 * fringe_width(cfg);
    }
    return 0.5 * cfg.slit_separation_d + 8.0 * sigma_t(cfg); // slit-plane pattern
}

int run_pattern(const ConfigCli& cli, const std::string& out,
                std::optional<std::size_t> points_flag, std::optional<double> xmin,
                std::optional<double> xmax) {
    const ConfigCli::Resolved run = cli.resolve("pattern");
    const auto points = pick<std::size_t>(points_flag, run.params, "points", 2001);
    if (points < 2) {
        throw std::invalid_argument("pattern: --points must be >= 2");
    }
    const double half = default_half_range(run.cfg);
    const double lo = pick<double>(xmin, run.params, "xmin", -half);
    const double hi = pick<double>(xmax, run.params, "xmax", half);
    if (!(lo < hi)) {
        throw std::invalid_argument("pattern: xmin must be < xmax");
    }
    const PatternSamples samples = sample_pattern(run.cfg, lo, hi, points);
    std::ostringstream csv;
    write_pattern_csv(csv, samples);
    write_text_file(out, csv.str());
    write_manifest(out, run.cfg, run.seed, "pattern",
                   {{"points", points}, {"xmin", lo}, {"xmax", hi}});
    std::cerr << "pattern: " << points << " points -> " << out << "\n";
    return 0;
}

int run_sweep(const ConfigCli& cli, const std::string& out,
              std::optional<std::string> c_list, std::optional<std::string> r_list,
              std::optional<std::string> theta_list) {
    const ConfigCli::Resolved run = cli.resolve("sweep");
    auto grid = [&](const std::optional<std::string>& flag, const char* key,
                    const char* fallback) {
        if (flag) {
            return parse_value_list(*flag);
        }
        if (run.params.contains(key)) {
            return run.params.at(key).get<std::vector<double>>();
        }
        return parse_value_list(fallback);
    };
    const std::vector<double> cs =
        grid(c_list, "c_values", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1");
    const std::vector<double> rs =
        grid(r_list, "r_values", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1");
    const std::vector<double> thetas = grid(theta_list, "theta_values", "0");
    const std::vector<DualityRow> rows = duality_sweep(cs, rs, thetas, run.cfg);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    write_text_file(out, csv.str());
    write_manifest(out, run.cfg, run.seed, "sweep",
                   {{"c_values", cs}, {"r_values", rs}, {"theta_values", thetas}});
    std::cerr << "sweep: " << rows.size() << " rows -> " << out << "\n";
    return 0;
}

int run_sample(const ConfigCli& cli, const std::string& out,
               std::optional<std::size_t> n_flag, std::optional<std::string> policy_flag,
               std::optional<unsigned> tasks_flag) {
    const ConfigCli::Resolved run = cli.resolve("sample");
    const auto n = pick<std::size_t>(n_flag, run.params, "n", 100000);
    const auto policy_text =
        pick<std::string>(policy_flag, run.params, "policy", "none");
    const auto tasks = pick<unsigned>(tasks_flag, run.params, "tasks", 1);
    if (n < 1) {
        throw std::invalid_argument("sample: --n must be >= 1");
    }
    const BasisPolicy policy = parse_policy(policy_text);
    const std::vector<DetectionEvent> events =
        run_experiment(run.cfg, n, policy, run.seed, tasks);
    std::ostringstream csv;
    write_events_csv(csv, events);
    write_text_file(out, csv.str());
    write_manifest(out, run.cfg, run.seed, "sample",
                   {{"n", n}, {"policy", policy_text}, {"tasks", tasks}});
    std::cerr << "sample: " << n << " events -> " << out << "\n";
    return 0;
}

int run_eraser(const ConfigCli& cli, const std::string& out,
               std::optional<std::size_t> n_flag, std::optional<std::size_t> bins_flag) {
    ConfigCli::Resolved run = cli.resolve("eraser");
    ExperimentConfig cfg = run.cfg;
    const std::uint64_t seed = run.seed;
    cfg.presence_c = 1.0; // the eraser setup: detector present,
    cfg.overlap_r = 0.0;  // orthonormal detector states
    cfg.overlap_phase_theta = 0.0;
    const auto n = pick<std::size_t>(n_flag, run.params, "n", 100000);
    const auto bins = pick<std::size_t>(bins_flag, run.params, "bins", 200);
    if (n < 1) {
        throw std::invalid_argument("eraser: --n must be >= 1");
    }
    const std::vector<DetectionEvent> events =
        run_experiment(cfg, n, BasisPolicy::fixed(Basis::eraser), seed);

    const double w = fringe_width(cfg);
    Histogram plus;
    Histogram minus;
    plus.lo = minus.lo = -4.0 * w;
    plus.hi = minus.hi = 4.0 * w;
    plus.bin_count = minus.bin_count = bins;
    plus.counts.assign(bins, 0);
    minus.counts.assign(bins, 0);
    std::vector<double> pooled;
    pooled.reserve(n);
    for (const DetectionEvent& ev : events) {
        (ev.detector_outcome == DetectorOutcome::plus ? plus : minus).add(ev.x);
        pooled.push_back(ev.x);
    }

    std::ostringstream csv;
    write_eraser_csv(csv, plus, minus);
    write_text_file(out, csv.str());

    const FringeStats stats_plus = estimate_visibility(plus, cfg);
    const FringeStats stats_minus = estimate_visibility(minus, cfg);
    const FringeStats stats_pooled =
        estimate_visibility(histogram(pooled, -4.0 * w, 4.0 * w, bins), cfg);

    nlohmann::json report;
    report["n_events"] = n;
    report["v_plus"] = stats_plus.visibility;
    report["v_minus"] = stats_minus.visibility;
    report["phase_plus"] = stats_plus.phase;
    report["phase_minus"] = stats_minus.phase;
    report["phase_shift"] = phase_shift(stats_plus, stats_minus);
    report["v_pooled"] = stats_pooled.visibility;
    if (stats_pooled.visibility <= 0.05) {
        report["pooled_phase_note"] = "pooled visibility consistent with zero; phase undefined";
    }
    write_text_file(out + ".report.json", report.dump(2) + "\n");
    write_manifest(out, cfg, seed, "eraser", {{"n", n}, {"bins", bins}});
    std::cerr << "eraser: " << n << " events -> " << out << " (+ report)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dualitylab: two-slit duality simulation laboratory"};
    app.require_subcommand(1);

    ConfigCli pattern_cfg, sweep_cfg, sample_cfg, eraser_cfg;

    auto* pattern = app.add_subcommand(
        "pattern", "evaluate the analytic screen intensity on a grid");
    std::string pattern_out = "pattern.csv";
    std::optional<std::size_t> pattern_points;
    std::optional<double> pattern_xmin, pattern_xmax;
    pattern_cfg.attach(pattern);
    pattern->add_option("--out", pattern_out, "output CSV path");
    pattern->add_option("--points", pattern_points, "grid size (default 2001)");
    pattern->add_option("--xmin", pattern_xmin, "grid start (default -4 fringe widths)");
    pattern->add_option("--xmax", pattern_xmax, "grid end (default +4 fringe widths)");

    auto* sweep = app.add_subcommand(
        "sweep", "duality sweep over (c, r, theta): D, V bound, measured V");
    std::string sweep_out = "sweep.csv";
    std::optional<std::string> sweep_c, sweep_r, sweep_theta;
    sweep_cfg.attach(sweep);
    sweep->add_option("--out", sweep_out, "output CSV path");
    sweep->add_option("--c-values", sweep_c,
                      "comma-separated presence weights (default 0..1 step 0.1)");
    sweep->add_option("--r-values", sweep_r,
                      "comma-separated overlaps (default 0..1 step 0.1)");
    sweep->add_option("--theta-values", sweep_theta, "comma-separated phases (default 0)");

    auto* sample = app.add_subcommand(
        "sample", "Monte Carlo detection events with coincidence measurements");
    std::string sample_out = "events.csv";
    std::optional<std::size_t> sample_n;
    std::optional<std::string> sample_policy;
    std::optional<unsigned> sample_tasks;
    sample_cfg.attach(sample);
    sample->add_option("--out", sample_out, "output CSV path");
    sample->add_option("--n", sample_n, "number of events (default 100000)");
    sample->add_option("--policy", sample_policy,
                       "fixed basis (none|whichway|eraser|location|location-whichway) "
                       "or random:basis=p,basis=p (default none)");
    sample->add_option("--tasks", sample_tasks,
                       "parallel generation tasks (output is identical for any value)");

    auto* eraser = app.add_subcommand(
        "eraser", "random quantum eraser run (forces c=1, r=0): sorted subensembles");
    std::string eraser_out = "eraser.csv";
    std::optional<std::size_t> eraser_n, eraser_bins;
    eraser_cfg.attach(eraser);
    eraser->add_option("--out", eraser_out, "output CSV path");
    eraser->add_option("--n", eraser_n, "number of events (default 100000)");
    eraser->add_option("--bins", eraser_bins, "histogram bins over [-4w, 4w] (default 200)");

    try {
        app.parse(argc, argv);
        if (pattern->parsed()) {
            return run_pattern(pattern_cfg, pattern_out, pattern_points, pattern_xmin,
                               pattern_xmax);
        }
        if (sweep->parsed()) {
            return run_sweep(sweep_cfg, sweep_out, sweep_c, sweep_r, sweep_theta);
        }
        if (sample->parsed()) {
            return run_sample(sample_cfg, sample_out, sample_n, sample_policy,
                              sample_tasks);
        }
        if (eraser->parsed()) {
            return run_eraser(eraser_cfg, eraser_out, eraser_n, eraser_bins);
        }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad config JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

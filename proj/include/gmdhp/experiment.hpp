#pragma once

#include "gmdhp/link_sim.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gmdhp {

struct ExperimentSpec {
    std::string name = "default";
    SimConfig config;
    std::string output_path = "results.csv";
    std::optional<double> ci_target;

    void validate() const;
};

/// Default experiment: 128x16 ULAs, 4 RF chains, 4 streams, 4 paths,
/// all four schemes, SNR -10..4 dB in 2 dB steps.
ExperimentSpec default_spec();
// Canned 128x16 and 256x16 sweeps: two streams, 1000 channels per SNR point.
ExperimentSpec fig3_spec();
ExperimentSpec fig4_spec();

/// Parse `key = value` lines ('#' starts a comment) on top of default_spec().
/// Unknown keys are reported together in one ConfigError.
ExperimentSpec parse_config(std::string_view text);

/// Apply a single key/value pair; used for config files and CLI overrides alike.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

// Comma list "a,b,c" or range "start:step:stop" (inclusive of stop).
std::vector<double> parse_snr_grid(std::string_view text);

/// Every (scheme, snr) point, sorted by scheme name then SNR.
std::vector<BerPoint> run_sweep(const ExperimentSpec& spec, const RunOptions& opts = {});

void write_csv(std::ostream& os, const std::vector<BerPoint>& points);
// One row per SNR, one BER column per scheme.
void write_plot_data(std::ostream& os, const std::vector<BerPoint>& points);
void write_metadata(std::ostream& os, const ExperimentSpec& spec, const RunOptions& opts);

/// Runs the sweep and writes <output_path>, <stem>.plot.csv and <stem>.meta.json.
/// Throws std::runtime_error naming the path on I/O failure.
std::vector<BerPoint> run_sweep_to_files(const ExperimentSpec& spec, const RunOptions& opts = {});

std::string build_identity();

}  // namespace gmdhp

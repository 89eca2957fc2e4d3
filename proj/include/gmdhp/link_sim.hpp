#pragma once

#include "gmdhp/channel.hpp"
#include "gmdhp/hybrid.hpp"
#include "gmdhp/modem.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gmdhp {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SimConfig {
    int n_t = 128;
    int n_r = 16;
    int n_rf = 4;
    int n_s = 4;
    int n_paths = 4;
    double spacing_over_wavelength = 0.5;
    double carrier_ghz = 28.0;  // informational only; d/lambda fixes the geometry
    std::vector<double> snr_db_grid;
    std::vector<Scheme> schemes;
    int channels_per_point = 200;
    int symbols_per_channel = 100;
    std::uint64_t master_seed = 1;

    /// Throws ConfigError naming the violated constraint.
    void validate() const;
};

struct BerPoint {
    Scheme scheme = Scheme::svd_digital;
    double snr_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> stream_errors;  // per spatial stream, sums to errors

    double ber() const { return bits == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(bits); }
};

struct Detection {
    std::vector<Nibble> symbols;
    std::vector<bool> erased;  // erased streams count all their bits as errors
};

/// Noise variance at each receive antenna for a given SNR: n_s / 10^(snr_db/10).
double noise_variance(int n_s, double snr_db);

/// W^H H P diag(sqrt(powers)).
CMatrix effective_channel(const CMatrix& H, const PrecoderBundle& bundle,
                          const std::vector<double>& powers);

/// Per-stream scalar equalizer: stream k is sliced from y_k / E_kk.
class ScalarDetector {
public:
    explicit ScalarDetector(const CMatrix& effective);
    Detection detect(const CVector& y) const;

private:
    CVector diag_;
};

/// QR-based successive interference cancellation. E = Q R with a nonnegative
/// real diagonal; streams are decided from last to first.
class SicDetector {
public:
    explicit SicDetector(const CMatrix& effective);
    Detection detect(const CVector& y) const;
    const CMatrix& triangular() const { return r_; }

private:
    CMatrix q_adj_;
    CMatrix r_;
};

Detection detect_svd(const CVector& y, const CMatrix& effective);
Detection detect_gmd_sic(const CVector& y, const CMatrix& effective);

struct RunOptions {
    int threads = 0;                   // 0 = OpenMP default
    std::optional<double> ci_target;   // relative 95% CI half-width for early stop
    int chunk_trials = 16;             // early-stop checks happen at chunk boundaries only
    bool progress = true;              // run_sweep reports each point on stderr
};

/// Errors for one channel trial, per stream.
std::vector<std::uint64_t> simulate_trial(const SimConfig& cfg, Scheme scheme, double snr_db,
                                          std::uint64_t trial);

/// Trials run on OpenMP threads; the result does not depend on the thread count.
BerPoint run_ber_point(const SimConfig& cfg, Scheme scheme, double snr_db, const RunOptions& opts = {});

/// Single-threaded reference with the same trial streams and stopping rule.
BerPoint run_ber_point_serial(const SimConfig& cfg, Scheme scheme, double snr_db,
                              const RunOptions& opts = {});

// Seed recorded on a BerPoint.
std::uint64_t point_seed(std::uint64_t master_seed, Scheme scheme, double snr_db);

}  // namespace gmdhp

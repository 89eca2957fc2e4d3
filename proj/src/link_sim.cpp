#include "gmdhp/link_sim.hpp"

#include "gmdhp/gmd.hpp"
#include "gmdhp/rng.hpp"

#include <bit>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gmdhp {

namespace {

constexpr double kErasureFloor = 1e-12;
constexpr std::uint64_t kChannelKey = 0xC4A77E1ULL;
constexpr std::uint64_t kPayloadKey = 0x9A710ADULL;

std::uint64_t snr_key(double snr_db) { return std::bit_cast<std::uint64_t>(snr_db); }

int popcount4(unsigned x) { return std::popcount(x & 0xFu); }

// Sums per-trial outcomes in trial order, stopping early at chunk boundaries
// once the confidence target is met.
template <typename RunChunk>
BerPoint accumulate(const SimConfig& cfg, Scheme scheme, double snr_db, const RunOptions& opts,
                    RunChunk&& run_chunk)
{
    cfg.validate();
    BerPoint pt;
    pt.scheme = scheme;
    pt.snr_db = snr_db;
    pt.seed = point_seed(cfg.master_seed, scheme, snr_db);
    pt.stream_errors.assign(static_cast<std::size_t>(cfg.n_s), 0);

    const std::uint64_t bits_per_trial = static_cast<std::uint64_t>(cfg.symbols_per_channel) *
                                         static_cast<std::uint64_t>(cfg.n_s) * kBitsPerSymbol;
    const auto budget = static_cast<std::uint64_t>(cfg.channels_per_point);
    const auto chunk = static_cast<std::uint64_t>(opts.ci_target ? std::max(1, opts.chunk_trials)
                                                                 : cfg.channels_per_point);

    std::vector<std::vector<std::uint64_t>> outcomes;
    for (std::uint64_t first = 0; first < budget; first += chunk) {
        const std::uint64_t last = std::min(budget, first + chunk);
        outcomes.assign(last - first, {});
        run_chunk(first, last, outcomes);
        for (const auto& per_stream : outcomes) {
            for (std::size_t k = 0; k < per_stream.size(); ++k) {
                pt.stream_errors[k] += per_stream[k];
                pt.errors += per_stream[k];
            }
            pt.bits += bits_per_trial;
            ++pt.trials;
        }

        if (opts.ci_target && pt.errors >= 100) {
            const double p = pt.ber();
            const double half_width = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(pt.bits));
            if (half_width <= *opts.ci_target * p)
                break;
        }
    }
    return pt;
}

}  // namespace

void SimConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (n_t < 1 || n_r < 1 || n_rf < 1 || n_s < 1 || n_paths < 1)
        fail("n_t, n_r, n_rf, n_s and L must be positive integers");
    if (n_s > n_rf)
        fail("n_s <= n_rf violated (n_s=" + std::to_string(n_s) + ", n_rf=" + std::to_string(n_rf) + ")");
    if (n_rf > std::min(n_t, n_r))
        fail("n_rf <= min(n_t, n_r) violated (n_rf=" + std::to_string(n_rf) + ")");
    if (n_s > n_paths)
        fail("n_s <= L violated (n_s=" + std::to_string(n_s) + ", L=" + std::to_string(n_paths) + ")");
    if (n_rf > n_paths)
        fail("n_rf <= L violated: the analog stage selects distinct steering vectors (n_rf=" +
             std::to_string(n_rf) + ", L=" + std::to_string(n_paths) + ")");
    if (!(spacing_over_wavelength > 0.0))
        fail("spacing_over_wavelength must be positive");
    if (channels_per_point < 1)
        fail("channels_per_point must be positive");
    if (symbols_per_channel < 1)
        fail("symbols_per_channel must be positive");
    for (double s : snr_db_grid) {
        if (!std::isfinite(s))
            fail("snr_db_grid contains a non-finite value");
    }
}

double noise_variance(int n_s, double snr_db)
{
    return static_cast<double>(n_s) / std::pow(10.0, snr_db / 10.0);
}

CMatrix effective_channel(const CMatrix& H, const PrecoderBundle& bundle,
                          const std::vector<double>& powers)
{
    CVector amp(static_cast<Eigen::Index>(powers.size()));
    for (std::size_t k = 0; k < powers.size(); ++k)
        amp(static_cast<Eigen::Index>(k)) = std::sqrt(powers[k]);
    return bundle.combiner.adjoint() * H * bundle.precoder * amp.asDiagonal();
}

ScalarDetector::ScalarDetector(const CMatrix& effective) : diag_(effective.diagonal()) {}

Detection ScalarDetector::detect(const CVector& y) const
{
    const auto n = diag_.size();
    Detection d;
    d.symbols.assign(static_cast<std::size_t>(n), 0);
    d.erased.assign(static_cast<std::size_t>(n), false);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(diag_(k)) < kErasureFloor) {
            d.erased[static_cast<std::size_t>(k)] = true;
            continue;
        }
        d.symbols[static_cast<std::size_t>(k)] = qam16_slice(y(k) / diag_(k));
    }
    return d;
}

SicDetector::SicDetector(const CMatrix& effective)
{
    const auto n = effective.cols();
    Eigen::HouseholderQR<CMatrix> qr(effective);
    CMatrix q = qr.householderQ() * CMatrix::Identity(effective.rows(), n);
    r_ = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double mag = std::abs(r_(k, k));
        if (mag == 0.0)
            continue;
        const cplx phase = r_(k, k) / mag;
        r_.row(k) *= std::conj(phase);
        q.col(k) *= phase;
        r_(k, k) = mag;
    }
    q_adj_ = q.adjoint();
}

Detection SicDetector::detect(const CVector& y) const
{
    const auto n = r_.rows();
    const CVector z = q_adj_ * y;
    Detection d;
    d.symbols.assign(static_cast<std::size_t>(n), 0);
    d.erased.assign(static_cast<std::size_t>(n), false);
    std::vector<cplx> decided(static_cast<std::size_t>(n), cplx{});

    for (Eigen::Index k = n - 1; k >= 0; --k) {
        const auto ku = static_cast<std::size_t>(k);
        if (r_(k, k).real() < kErasureFloor) {
            d.erased[ku] = true;
            continue;  // an erased stream contributes nothing to cancellation
        }
        cplx acc = z(k);
        for (Eigen::Index j = k + 1; j < n; ++j)
            acc -= r_(k, j) * decided[static_cast<std::size_t>(j)];
        d.symbols[ku] = qam16_slice(acc / r_(k, k).real());
        decided[ku] = qam16_map(d.symbols[ku]);
    }
    return d;
}

Detection detect_svd(const CVector& y, const CMatrix& effective)
{
    return ScalarDetector(effective).detect(y);
}

Detection detect_gmd_sic(const CVector& y, const CMatrix& effective)
{
    return SicDetector(effective).detect(y);
}

std::uint64_t point_seed(std::uint64_t master_seed, Scheme scheme, double snr_db)
{
    return derive_seed(master_seed, {kPayloadKey, static_cast<std::uint64_t>(scheme), snr_key(snr_db)});
}

std::vector<std::uint64_t> simulate_trial(const SimConfig& cfg, Scheme scheme, double snr_db,
                                          std::uint64_t trial)
{
    const auto n_s = static_cast<std::size_t>(cfg.n_s);
    const std::uint64_t bits_per_stream =
        static_cast<std::uint64_t>(cfg.symbols_per_channel) * kBitsPerSymbol;
    std::vector<std::uint64_t> errors(n_s, 0);

    // Channels depend on the trial only, so every scheme and SNR sees the same draws.
    RandomStream chan_rng(derive_seed(cfg.master_seed, {kChannelKey, trial}));
    const ArrayGeometry geom_t{cfg.n_t, cfg.spacing_over_wavelength};
    const ArrayGeometry geom_r{cfg.n_r, cfg.spacing_over_wavelength};
    const ChannelRealization chan = draw_channel(cfg.n_paths, geom_t, geom_r, chan_rng);

    PrecoderBundle bundle;
    try {
        bundle = build_bundle(chan, scheme, cfg.n_rf, cfg.n_s);
    } catch (const RankDeficiencyError&) {
        errors.assign(n_s, bits_per_stream);  // no usable link: full outage
        return errors;
    }

    const double noise_var = noise_variance(cfg.n_s, snr_db);
    const std::vector<double> powers =
        is_gmd(scheme) ? std::vector<double>(n_s, 1.0)
                       : water_fill(bundle.subchannel_gains, static_cast<double>(cfg.n_s), noise_var);

    const CMatrix effective = effective_channel(chan.H, bundle, powers);
    CVector amp(cfg.n_s);
    for (std::size_t k = 0; k < n_s; ++k)
        amp(static_cast<Eigen::Index>(k)) = std::sqrt(powers[k]);
    const CMatrix tx_map = chan.H * bundle.precoder * amp.asDiagonal();
    const CMatrix combiner_adj = bundle.combiner.adjoint();

    const bool sic = is_gmd(scheme);
    const ScalarDetector scalar(sic ? CMatrix::Identity(cfg.n_s, cfg.n_s) : effective);
    const SicDetector triangular(sic ? effective : CMatrix::Identity(cfg.n_s, cfg.n_s));

    RandomStream rng(derive_seed(point_seed(cfg.master_seed, scheme, snr_db), {trial}));
    std::vector<Nibble> sent(n_s);
    CVector s(cfg.n_s);
    CVector received(cfg.n_r);
    for (int sym = 0; sym < cfg.symbols_per_channel; ++sym) {
        std::uint64_t word = 0;
        for (std::size_t k = 0; k < n_s; ++k) {
            if (k % 16 == 0)
                word = rng.bits();
            sent[k] = static_cast<Nibble>((word >> (4 * (k % 16))) & 0xFu);
            s(static_cast<Eigen::Index>(k)) = qam16_map(sent[k]);
        }
        received.noalias() = tx_map * s;
        for (Eigen::Index i = 0; i < cfg.n_r; ++i)
            received(i) += rng.complex_normal(noise_var);
        const CVector y = combiner_adj * received;

        const Detection det = sic ? triangular.detect(y) : scalar.detect(y);
        for (std::size_t k = 0; k < n_s; ++k) {
            errors[k] += det.erased[k] ? kBitsPerSymbol
                                       : static_cast<std::uint64_t>(popcount4(sent[k] ^ det.symbols[k]));
        }
    }
    return errors;
}

BerPoint run_ber_point(const SimConfig& cfg, Scheme scheme, double snr_db, const RunOptions& opts)
{
    return accumulate(cfg, scheme, snr_db, opts,
                      [&](std::uint64_t first, std::uint64_t last, auto& outcomes) {
                          const auto count = static_cast<long long>(last - first);
#ifdef _OPENMP
                          const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
                          for (long long t = 0; t < count; ++t) {
                              outcomes[static_cast<std::size_t>(t)] =
                                  simulate_trial(cfg, scheme, snr_db, first + static_cast<std::uint64_t>(t));
                          }
                      });
}

BerPoint run_ber_point_serial(const SimConfig& cfg, Scheme scheme, double snr_db, const RunOptions& opts)
{
    return accumulate(cfg, scheme, snr_db, opts,
                      [&](std::uint64_t first, std::uint64_t last, auto& outcomes) {
                          for (std::uint64_t t = first; t < last; ++t)
                              outcomes[t - first] = simulate_trial(cfg, scheme, snr_db, t);
                      });
}

}  // namespace gmdhp

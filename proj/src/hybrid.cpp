#include "gmdhp/hybrid.hpp"

#include "gmdhp/gmd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gmdhp {

namespace {

// Residual norms at or below this are treated as exact fits; the normalized
// residual is then left at zero instead of dividing by ~0.
constexpr double kTinyResidual = 1e-300;

void check_rf_counts(const ChannelRealization& chan, int n_rf_t, int n_rf_r, int n_s)
{
    const auto n_t = chan.H.cols();
    const auto n_r = chan.H.rows();
    if (n_s < 1)
        throw DimensionError("stream count must be positive");
    if (n_rf_t < n_s || n_rf_t > n_t)
        throw DimensionError("transmit RF chains " + std::to_string(n_rf_t) +
                             " must lie in [n_s, N_t] = [" + std::to_string(n_s) + ", " +
                             std::to_string(n_t) + "]");
    if (n_rf_r < n_s || n_rf_r > n_r)
        throw DimensionError("receive RF chains " + std::to_string(n_rf_r) +
                             " must lie in [n_s, N_r] = [" + std::to_string(n_s) + ", " +
                             std::to_string(n_r) + "]");
}

SvdTruncated channel_svd(const ChannelRealization& chan, int n_s)
{
    SvdTruncated svd = svd_truncated(chan.H, n_s);
    require_full_rank(svd);
    return svd;
}

// Shared body of the two hybrid builders; identity rotations give the SVD baseline.
PrecoderBundle build_hybrid(const ChannelRealization& chan, int n_rf_t, int n_rf_r,
                            const SvdTruncated& svd, const CMatrix& rot_r, const CMatrix& rot_l)
{
    const auto n_s = static_cast<double>(svd.sigma.size());

    PrecoderBundle b;
    b.tx = omp_factor(svd.V1, chan.A_t, n_rf_t);
    CMatrix q_d = b.tx.digital * rot_r;
    q_d *= std::sqrt(n_s) / frob_norm(b.tx.analog * q_d);
    b.tx.digital = q_d;
    b.precoder = b.tx.analog * q_d;

    b.rx = omp_factor(svd.U1, chan.A_r, n_rf_r);
    b.rx.digital = b.rx.digital * rot_l;
    b.combiner = b.rx.analog * b.rx.digital;
    return b;
}

}  // namespace

std::string_view scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::svd_digital: return "svd_digital";
    case Scheme::svd_hybrid: return "svd_hybrid";
    case Scheme::gmd_digital: return "gmd_digital";
    case Scheme::gmd_hybrid: return "gmd_hybrid";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name)
{
    for (Scheme s : {Scheme::svd_digital, Scheme::svd_hybrid, Scheme::gmd_digital, Scheme::gmd_hybrid}) {
        if (scheme_name(s) == name)
            return s;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

bool is_gmd(Scheme s) { return s == Scheme::gmd_digital || s == Scheme::gmd_hybrid; }
bool is_hybrid(Scheme s) { return s == Scheme::svd_hybrid || s == Scheme::gmd_hybrid; }

HybridFactor omp_factor(const CMatrix& target, const CMatrix& dictionary, int n_rf)
{
    const auto n = target.rows();
    const auto n_atoms = dictionary.cols();
    if (dictionary.rows() != n)
        throw DimensionError("omp_factor: dictionary has " + std::to_string(dictionary.rows()) +
                             " rows, target has " + std::to_string(n));
    if (n_rf < 1 || n_rf > n_atoms)
        throw DimensionError("omp_factor: n_rf=" + std::to_string(n_rf) + " outside [1, " +
                             std::to_string(n_atoms) + "]");

    const double modulus = 1.0 / std::sqrt(static_cast<double>(n));
    HybridFactor f;
    f.analog.resize(n, 0);
    f.residual_history.push_back(frob_norm(target));

    std::vector<bool> used(static_cast<std::size_t>(n_atoms), false);
    CMatrix residual = target;
    for (int round = 0; round < n_rf; ++round) {
        const CMatrix phi = dictionary.adjoint() * residual;
        int best = -1;
        double best_energy = -1.0;
        for (Eigen::Index l = 0; l < n_atoms; ++l) {
            if (used[static_cast<std::size_t>(l)])
                continue;
            const double energy = phi.row(l).squaredNorm();
            if (energy > best_energy) {
                best_energy = energy;
                best = static_cast<int>(l);
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        f.selected.push_back(best);

        f.analog.conservativeResize(n, round + 1);
        for (Eigen::Index i = 0; i < n; ++i)
            f.analog(i, round) = std::polar(modulus, std::arg(dictionary(i, best)));

        f.digital = pseudo_inverse(f.analog) * target;
        residual = target - f.analog * f.digital;
        const double res_norm = frob_norm(residual);
        f.residual_history.push_back(res_norm);
        if (res_norm > kTinyResidual)
            residual /= res_norm;
        else
            residual.setZero();
    }
    return f;
}

PrecoderBundle build_gmd_hybrid(const ChannelRealization& chan, int n_rf_t, int n_rf_r, int n_s)
{
    check_rf_counts(chan, n_rf_t, n_rf_r, n_s);
    const SvdTruncated svd = channel_svd(chan, n_s);
    const GmdTriple gmd = gmd_from_svd(svd);

    PrecoderBundle b = build_hybrid(chan, n_rf_t, n_rf_r, svd, gmd.S_R, gmd.S_L);
    b.scheme = Scheme::gmd_hybrid;
    b.subchannel_gains.assign(static_cast<std::size_t>(n_s), gmd.r_bar);
    return b;
}

PrecoderBundle build_svd_hybrid(const ChannelRealization& chan, int n_rf_t, int n_rf_r, int n_s)
{
    check_rf_counts(chan, n_rf_t, n_rf_r, n_s);
    const SvdTruncated svd = channel_svd(chan, n_s);
    const CMatrix eye = CMatrix::Identity(n_s, n_s);

    PrecoderBundle b = build_hybrid(chan, n_rf_t, n_rf_r, svd, eye, eye);
    b.scheme = Scheme::svd_hybrid;
    b.subchannel_gains = svd.sigma;
    return b;
}

PrecoderBundle build_fully_digital(const ChannelRealization& chan, int n_s, DigitalMode mode)
{
    const SvdTruncated svd = channel_svd(chan, n_s);
    PrecoderBundle b;
    if (mode == DigitalMode::svd) {
        b.scheme = Scheme::svd_digital;
        b.precoder = svd.V1;
        b.combiner = svd.U1;
        b.subchannel_gains = svd.sigma;
    } else {
        const GmdTriple gmd = gmd_from_svd(svd);
        b.scheme = Scheme::gmd_digital;
        b.precoder = gmd.Q1;
        b.combiner = gmd.G1;
        b.subchannel_gains.assign(static_cast<std::size_t>(n_s), gmd.r_bar);
    }
    return b;
}

PrecoderBundle build_bundle(const ChannelRealization& chan, Scheme scheme, int n_rf, int n_s)
{
    switch (scheme) {
    case Scheme::svd_digital: return build_fully_digital(chan, n_s, DigitalMode::svd);
    case Scheme::gmd_digital: return build_fully_digital(chan, n_s, DigitalMode::gmd);
    case Scheme::svd_hybrid: return build_svd_hybrid(chan, n_rf, n_rf, n_s);
    case Scheme::gmd_hybrid: return build_gmd_hybrid(chan, n_rf, n_rf, n_s);
    }
    throw std::invalid_argument("unhandled scheme");
}

}  // namespace gmdhp

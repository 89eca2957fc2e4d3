#include "gmdhp/gmd_check.hpp"

#include "gmdhp/channel.hpp"
#include "gmdhp/gmd.hpp"
#include "gmdhp/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace gmdhp {

bool GmdCheckReport::passed(double tol) const
{
    return instances > 0 && max_diag_dev <= tol && max_lower <= 1e-10 && max_rotation_dev <= tol &&
           max_unitary_dev <= 1e-10 && max_spectrum_dev <= tol && max_recon_dev <= tol;
}

std::string GmdCheckReport::summary() const
{
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "instances=%d diag=%.3e lower=%.3e rotation=%.3e unitary=%.3e spectrum=%.3e "
                  "reconstruction=%.3e time=%.2fs",
                  instances, max_diag_dev, max_lower, max_rotation_dev, max_unitary_dev,
                  max_spectrum_dev, max_recon_dev, seconds);
    return buf;
}

GmdCheckReport run_gmd_check(int instances, std::uint64_t seed)
{
    static constexpr int kTx[] = {16, 32, 64, 128, 256};
    static constexpr int kRx[] = {4, 8, 16};

    GmdCheckReport rep;
    const auto start = std::chrono::steady_clock::now();
    RandomStream master(seed);
    for (int k = 0; k < instances; ++k) {
        RandomStream rng = master.split({static_cast<std::uint64_t>(k)});
        const int n_t = kTx[rng.bits() % std::size(kTx)];
        const int n_r = kRx[rng.bits() % std::size(kRx)];
        const int n_s = 2 + static_cast<int>(rng.bits() % 3);
        const int n_paths = n_s + static_cast<int>(rng.bits() % 3);

        const auto chan = draw_channel(n_paths, {n_t, 0.5}, {n_r, 0.5}, rng);
        const SvdTruncated svd = svd_truncated(chan.H, n_s);
        const GmdTriple g = gmd_from_svd(svd);
        const double r_bar = g.r_bar;
        const CMatrix eye = CMatrix::Identity(n_s, n_s);

        for (int i = 0; i < n_s; ++i) {
            rep.max_diag_dev = std::max(rep.max_diag_dev, std::abs(g.R1(i, i) - r_bar) / r_bar);
            for (int j = 0; j < i; ++j)
                rep.max_lower = std::max(rep.max_lower, std::abs(g.R1(i, j)) / r_bar);
        }
        rep.max_rotation_dev = std::max({rep.max_rotation_dev, frob_norm(g.Q1 - svd.V1 * g.S_R),
                                         frob_norm(g.G1 - svd.U1 * g.S_L)});
        rep.max_unitary_dev = std::max({rep.max_unitary_dev, frob_norm(g.S_L.adjoint() * g.S_L - eye),
                                        frob_norm(g.S_R.adjoint() * g.S_R - eye)});

        const Eigen::VectorXd rs = g.R1.jacobiSvd().singularValues();
        for (int i = 0; i < n_s; ++i) {
            rep.max_spectrum_dev =
                std::max(rep.max_spectrum_dev, std::abs(rs(i) - svd.sigma[static_cast<std::size_t>(i)]) /
                                                   svd.sigma[static_cast<std::size_t>(i)]);
        }
        const CMatrix low_rank = svd.reconstruct();
        rep.max_recon_dev = std::max(rep.max_recon_dev, frob_norm(g.G1 * g.R1 * g.Q1.adjoint() - low_rank) /
                                                            frob_norm(low_rank));
        ++rep.instances;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace gmdhp

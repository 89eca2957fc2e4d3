#include "gmdhp/gmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gmdhp {

namespace {

// Relative distance below which two diagonal values count as equal.
constexpr double kEqualTol = 1e-12;

// c^2 via the factored difference of squares, falling back to logs when the
// products leave the representable range.
double cos_squared(double r_ii, double r_jj, double r_bar)
{
    const double num = (r_bar - r_jj) * (r_bar + r_jj);
    const double den = (r_ii - r_jj) * (r_ii + r_jj);
    double c2 = num / den;
    if (!std::isfinite(c2) || den == 0.0) {
        const double log_c2 = std::log(std::abs(r_bar - r_jj)) + std::log(r_bar + r_jj) -
                              std::log(std::abs(r_ii - r_jj)) - std::log(r_ii + r_jj);
        c2 = std::exp(log_c2);
    }
    if (!std::isfinite(c2))
        c2 = 1.0;
    return std::clamp(c2, 0.0, 1.0);
}

GivensPair givens_unchecked(double r_ii, double r_jj, double r_bar)
{
    if (std::abs(r_ii - r_jj) <= kEqualTol * r_bar)
        return {1.0, 0.0};
    const double c2 = cos_squared(r_ii, r_jj, r_bar);
    return {std::sqrt(c2), std::sqrt(1.0 - c2)};
}

void swap_index(CMatrix& R, CMatrix& S_L, CMatrix& S_R, int a, int b)
{
    if (a == b)
        return;
    R.row(a).swap(R.row(b));
    R.col(a).swap(R.col(b));
    S_L.col(a).swap(S_L.col(b));
    S_R.col(a).swap(S_R.col(b));
}

std::vector<double> real_diag(const CMatrix& R)
{
    std::vector<double> d(static_cast<std::size_t>(R.rows()));
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        d[static_cast<std::size_t>(i)] = R(i, i).real();
    return d;
}

int choose_pivot(const CMatrix& R, int i, double r_bar)
{
    const int n = static_cast<int>(R.rows());
    const bool above = R(i, i).real() >= r_bar;
    for (int p = i + 1; p < n; ++p) {
        const double r_pp = R(p, p).real();
        if (above ? r_pp <= r_bar : r_pp >= r_bar)
            return p;
    }
    // Only reachable through rounding: take the closest remaining entry.
    int best = i + 1;
    for (int p = i + 2; p < n; ++p) {
        if (std::abs(R(p, p).real() - r_bar) < std::abs(R(best, best).real() - r_bar))
            best = p;
    }
    return best;
}

}  // namespace

RankDeficiencyError::RankDeficiencyError(int index, double value)
    : std::runtime_error("singular value " + std::to_string(index) + " is " +
                         std::to_string(value) + "; channel rank is below the stream count"),
      index_(index)
{
}

void require_full_rank(const SvdTruncated& svd)
{
    if (svd.sigma.empty())
        return;
    const double big_dim = static_cast<double>(std::max(svd.U1.rows(), svd.V1.rows()));
    const double cutoff = big_dim * std::numeric_limits<double>::epsilon() * svd.sigma.front();
    for (std::size_t k = 0; k < svd.sigma.size(); ++k) {
        if (!(svd.sigma[k] > cutoff))
            throw RankDeficiencyError(static_cast<int>(k), svd.sigma[k]);
    }
}

double geometric_mean(std::span<const double> sigma)
{
    if (sigma.empty())
        throw std::invalid_argument("geometric_mean of an empty list");
    double acc = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!(sigma[i] > 0.0))
            throw RankDeficiencyError(static_cast<int>(i), sigma[i]);
        acc += std::log(sigma[i]);
    }
    return std::exp(acc / static_cast<double>(sigma.size()));
}

GivensPair givens_pair(double r_ii, double r_jj, double r_bar)
{
    const double lo = std::min(r_ii, r_jj);
    const double hi = std::max(r_ii, r_jj);
    if (r_bar < lo * (1.0 - kEqualTol) || r_bar > hi * (1.0 + kEqualTol))
        throw std::domain_error("givens_pair: target " + std::to_string(r_bar) +
                                " not between " + std::to_string(lo) + " and " +
                                std::to_string(hi));
    return givens_unchecked(r_ii, r_jj, r_bar);
}

Eigen::Matrix2d givens_left(const GivensPair& g, double r_ii, double r_jj, double r_bar)
{
    Eigen::Matrix2d t;
    t << g.c * r_ii, g.s * r_jj, -g.s * r_jj, g.c * r_ii;
    return t / r_bar;
}

Eigen::Matrix2d givens_right(const GivensPair& g)
{
    Eigen::Matrix2d t;
    t << g.c, -g.s, g.s, g.c;
    return t;
}

GmdTriple gmd_from_svd(const SvdTruncated& svd, const GmdTraceHook& trace)
{
    const int n = static_cast<int>(svd.sigma.size());
    if (n < 1)
        throw DimensionError("gmd_from_svd: empty singular value list");
    if (svd.U1.cols() != n || svd.V1.cols() != n)
        throw DimensionError("gmd_from_svd: factor widths do not match singular value count");

    require_full_rank(svd);

    GmdTriple out;
    out.r_bar = geometric_mean(svd.sigma);
    const double r_bar = out.r_bar;

    CMatrix R = diag_matrix(svd.sigma);
    CMatrix S_L = CMatrix::Identity(n, n);
    CMatrix S_R = CMatrix::Identity(n, n);

    for (int i = 0; i + 1 < n; ++i) {
        GmdStage info;
        info.stage = i;

        if (std::abs(R(i, i).real() - r_bar) <= kEqualTol * r_bar) {
            info.pivot = i + 1;
            info.skipped = true;
        } else {
            const int p = choose_pivot(R, i, r_bar);
            swap_index(R, S_L, S_R, i + 1, p);

            const double r_ii = R(i, i).real();
            const double r_jj = R(i + 1, i + 1).real();
            const GivensPair g = givens_unchecked(r_ii, r_jj, r_bar);
            const Eigen::Matrix2cd left = givens_left(g, r_ii, r_jj, r_bar).cast<cplx>();
            const Eigen::Matrix2cd right = givens_right(g).cast<cplx>();

            R.middleRows(i, 2) = left * R.middleRows(i, 2);
            R.middleCols(i, 2) = R.middleCols(i, 2) * right;
            R(i + 1, i) = 0.0;
            S_L.middleCols(i, 2) = S_L.middleCols(i, 2) * left.transpose();
            S_R.middleCols(i, 2) = S_R.middleCols(i, 2) * right;

            info.pivot = p;
            info.rotation = g;
        }
        if (trace) {
            info.diag = real_diag(R);
            trace(info);
        }
    }

    out.R1 = std::move(R);
    out.Q1 = svd.V1 * S_R;
    out.G1 = svd.U1 * S_L;
    out.S_L = std::move(S_L);
    out.S_R = std::move(S_R);
    return out;
}

}  // namespace gmdhp

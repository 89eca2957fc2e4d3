#pragma once

// Reference computations used only by the test suites. Nothing here calls
// into the library code paths being checked.

#include "gmdhp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a)
{
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a[p][q] * a[p][q];
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300)
                    continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Singular values (descending) from the eigenvalues of A^H A, computed through
// the real embedding [[X, -Y], [Y, X]] of the Hermitian matrix X + iY.
inline std::vector<double> singular_values_via_gram(const gmdhp::CMatrix& A)
{
    const gmdhp::CMatrix G = A.adjoint() * A;
    const auto n = static_cast<std::size_t>(G.rows());
    std::vector<std::vector<double>> m(2 * n, std::vector<double>(2 * n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto g = G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            m[i][j] = g.real();
            m[i + n][j + n] = g.real();
            m[i][j + n] = -g.imag();
            m[i + n][j] = g.imag();
        }
    }
    const auto ev = symmetric_eigenvalues(m);
    std::vector<double> sv;
    for (std::size_t i = 0; i < ev.size(); i += 2)
        sv.push_back(std::sqrt(std::max(0.0, 0.5 * (ev[i] + ev[i + 1]))));
    std::sort(sv.rbegin(), sv.rend());
    return sv;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Exact bit error rate of Gray 16-QAM on AWGN. es_n0 is linear Es/N0 with N0
// the complex noise variance. Per dimension the constellation is 4-PAM with
// spacing 2d, d = sqrt(Es/10); x = d / sqrt(N0/2).
inline double qam16_gray_ber(double es_n0)
{
    const double x = std::sqrt(es_n0 / 5.0);
    return (3.0 * q_function(x) + 2.0 * q_function(3.0 * x) - q_function(5.0 * x)) / 4.0;
}

// Water level by bisection on mu; returns per-channel powers.
inline std::vector<double> water_fill_bisection(const std::vector<double>& gains, double total, double noise)
{
    auto used = [&](double mu) {
        double s = 0.0;
        for (double g : gains)
            s += std::max(0.0, mu - noise / (g * g));
        return s;
    };
    double lo = 0.0, hi = total;
    for (double g : gains)
        hi = std::max(hi, total + noise / (g * g));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (used(mid) > total ? hi : lo) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    std::vector<double> p;
    for (double g : gains)
        p.push_back(std::max(0.0, mu - noise / (g * g)));
    return p;
}

// Smallest least-squares residual ||target - D_S X||_F over all column subsets S of size k.
inline double best_subset_residual(const gmdhp::CMatrix& target, const gmdhp::CMatrix& dictionary, int k)
{
    const int n = static_cast<int>(dictionary.cols());
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::iota(pick.begin(), pick.end(), 0);
    double best = INFINITY;
    while (true) {
        gmdhp::CMatrix sub(dictionary.rows(), k);
        for (int j = 0; j < k; ++j)
            sub.col(j) = dictionary.col(pick[static_cast<std::size_t>(j)]);
        // Normal-equation solve, independent of the library pseudo-inverse.
        const gmdhp::CMatrix x = (sub.adjoint() * sub).ldlt().solve(sub.adjoint() * target);
        best = std::min(best, (target - sub * x).norm());

        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i)
            --i;
        if (i < 0)
            break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

// SNR at which log10(BER) crosses log10(target), interpolated linearly in dB;
// NaN when the curve never crosses inside the grid.
inline double snr_at_ber(const std::vector<double>& snr_db, const std::vector<double>& ber, double target)
{
    const double lt = std::log10(target);
    for (std::size_t i = 0; i + 1 < snr_db.size(); ++i) {
        if (ber[i] >= target && ber[i + 1] < target) {
            if (ber[i + 1] <= 0.0)
                return snr_db[i + 1];
            const double a = std::log10(ber[i]);
            const double b = std::log10(ber[i + 1]);
            return snr_db[i] + (a - lt) / (a - b) * (snr_db[i + 1] - snr_db[i]);
        }
    }
    return NAN;
}

}  // namespace oracle

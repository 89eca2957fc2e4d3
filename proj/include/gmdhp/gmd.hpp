#pragma once

#include "gmdhp/linalg.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gmdhp {

// A retained singular value is zero (or numerically zero); the equal-diagonal
// factorization does not exist.
class RankDeficiencyError : public std::runtime_error {
public:
    RankDeficiencyError(int index, double value);
    int index() const { return index_; }

private:
    int index_;
};

// H ~= G1 R1 Q1^H with R1 upper triangular and constant diagonal r_bar,
// Q1 = V1 S_R, G1 = U1 S_L and R1 = S_L^H Sigma1 S_R.
struct GmdTriple {
    CMatrix G1;
    CMatrix R1;
    CMatrix Q1;
    CMatrix S_L;
    CMatrix S_R;
    double r_bar = 0.0;
};

struct GivensPair {
    double c = 1.0;
    double s = 0.0;
};

// Snapshot emitted after each stage of gmd_from_svd.
struct GmdStage {
    int stage = 0;      // 0-based index of the diagonal entry fixed by this stage
    int pivot = 0;      // index swapped into position stage + 1
    bool skipped = false;
    GivensPair rotation;
    std::vector<double> diag;  // real part of diag(R1) after the stage
};

using GmdTraceHook = std::function<void(const GmdStage&)>;

/// Throws RankDeficiencyError if any singular value is at or below
/// max(rows) * eps * sigma_1.
void require_full_rank(const SvdTruncated& svd);

/// (prod sigma_i)^(1/n), evaluated in the log domain.
double geometric_mean(std::span<const double> sigma);

/// Rotation coefficients that move r_ii to r_bar:
///   c = sqrt((r_bar^2 - r_jj^2) / (r_ii^2 - r_jj^2)), s = sqrt(1 - c^2).
/// Throws std::domain_error when r_bar is not between r_ii and r_jj.
GivensPair givens_pair(double r_ii, double r_jj, double r_bar);

/// 2x2 left factor (1/r_bar) [[c r_ii, s r_jj], [-s r_jj, c r_ii]].
Eigen::Matrix2d givens_left(const GivensPair& g, double r_ii, double r_jj, double r_bar);
/// 2x2 right factor [[c, -s], [s, c]].
Eigen::Matrix2d givens_right(const GivensPair& g);

/// Equal-diagonal triangularization of a truncated SVD by pivoted Givens pairs.
/// Rotations are accumulated on the small n_s x n_s factors only; the tall
/// factors are formed once at the end.
GmdTriple gmd_from_svd(const SvdTruncated& svd, const GmdTraceHook& trace = {});

}  // namespace gmdhp

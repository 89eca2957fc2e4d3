#include "gmdhp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmdhp {

namespace {

double rank_cutoff(const CMatrix& A, double sigma_max)
{
    const auto n = static_cast<double>(std::max(A.rows(), A.cols()));
    return n * std::numeric_limits<double>::epsilon() * sigma_max;
}

}  // namespace

CMatrix SvdTruncated::reconstruct() const
{
    return U1 * diag_matrix(sigma) * V1.adjoint();
}

double frob_norm(const CMatrix& A)
{
    double acc = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            acc += std::norm(A(i, j));
    return std::sqrt(acc);
}

SvdTruncated svd_truncated(const CMatrix& A, int k)
{
    const auto max_k = std::min(A.rows(), A.cols());
    if (k < 1 || k > max_k)
        throw DimensionError("svd_truncated: k=" + std::to_string(k) + " outside [1, " +
                             std::to_string(max_k) + "]");

    // Two-sided Jacobi is slow for wide inputs; decompose the tall orientation.
    const bool wide = A.cols() > A.rows();
    const CMatrix M = wide ? CMatrix(A.adjoint()) : A;
    Eigen::JacobiSVD<CMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
        M, Eigen::ComputeThinU | Eigen::ComputeThinV);

    SvdTruncated out;
    const auto& s = svd.singularValues();
    out.sigma.assign(s.data(), s.data() + k);
    if (wide) {
        out.U1 = svd.matrixV().leftCols(k);
        out.V1 = svd.matrixU().leftCols(k);
    } else {
        out.U1 = svd.matrixU().leftCols(k);
        out.V1 = svd.matrixV().leftCols(k);
    }
    return out;
}

CMatrix pseudo_inverse(const CMatrix& A)
{
    const int k = static_cast<int>(std::min(A.rows(), A.cols()));
    const SvdTruncated f = svd_truncated(A, k);
    const double cutoff = rank_cutoff(A, f.sigma.front());

    CMatrix out = CMatrix::Zero(A.cols(), A.rows());
    for (int i = 0; i < k; ++i) {
        if (f.sigma[i] <= cutoff)
            break;
        out += (f.V1.col(i) / f.sigma[i]) * f.U1.col(i).adjoint();
    }
    return out;
}

CMatrix diag_matrix(const std::vector<double>& values)
{
    const auto n = static_cast<Eigen::Index>(values.size());
    CMatrix D = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        D(i, i) = values[i];
    return D;
}

int numerical_rank(const CMatrix& A)
{
    const int k = static_cast<int>(std::min(A.rows(), A.cols()));
    const SvdTruncated f = svd_truncated(A, k);
    const double cutoff = rank_cutoff(A, f.sigma.front());
    return static_cast<int>(std::count_if(f.sigma.begin(), f.sigma.end(),
                                          [&](double s) { return s > cutoff; }));
}

}  // namespace gmdhp

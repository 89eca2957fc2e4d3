#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmdhp {

using cplx = std::complex<double>;

// Dense complex matrix used for every channel / precoder quantity.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Raised when matrix shapes or ranks requested by a caller are inconsistent.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thin SVD keeping the k dominant singular triplets.
struct SvdTruncated {
    CMatrix U1;                 // rows x k, orthonormal columns
    std::vector<double> sigma;  // k values, nonincreasing
    CMatrix V1;                 // cols x k, orthonormal columns

    CMatrix reconstruct() const;
};

double frob_norm(const CMatrix& A);

/// Best rank-k approximation factors of A. Column phases are unspecified.
SvdTruncated svd_truncated(const CMatrix& A, int k);

/// Moore-Penrose pseudo-inverse. Singular values below
/// max(rows, cols) * eps * sigma_max are treated as zero.
CMatrix pseudo_inverse(const CMatrix& A);

// Diagonal matrix built from real values.
CMatrix diag_matrix(const std::vector<double>& values);

// Number of singular values above the pseudo-inverse cutoff.
int numerical_rank(const CMatrix& A);

}  // namespace gmdhp

#pragma once

#include <cstdint>
#include <string>

namespace gmdhp {

// Worst-case deviations observed by run_gmd_check.
struct GmdCheckReport {
    int instances = 0;
    double max_diag_dev = 0.0;        // max |R1_ii - r_bar| / r_bar
    double max_lower = 0.0;           // max |R1_ij| / r_bar, i > j
    double max_rotation_dev = 0.0;    // max(||Q1 - V1 S_R||_F, ||G1 - U1 S_L||_F)
    double max_unitary_dev = 0.0;     // max(||S^H S - I||_F) over S_L, S_R
    double max_spectrum_dev = 0.0;    // max relative singular value mismatch of R1 vs Sigma1
    double max_recon_dev = 0.0;       // max ||G1 R1 Q1^H - U1 Sigma1 V1^H||_F / ||Sigma1||_F
    double seconds = 0.0;

    bool passed(double tol = 1e-9) const;
    std::string summary() const;
};

/// Decomposes `instances` random multipath channels with N_t in {16..256},
/// N_r in {4..16} and n_s in {2, 3, 4}, recording invariant violations.
GmdCheckReport run_gmd_check(int instances, std::uint64_t seed);

}  // namespace gmdhp

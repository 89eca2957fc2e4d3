#pragma once

#include "gmdhp/channel.hpp"
#include "gmdhp/linalg.hpp"

#include <string_view>
#include <vector>

namespace gmdhp {

// Constant-modulus analog stage times unconstrained digital stage.
struct HybridFactor {
    CMatrix analog;                        // N x n_rf, |entry| = 1/sqrt(N)
    CMatrix digital;                       // n_rf x n_s
    std::vector<int> selected;             // dictionary columns, in selection order
    std::vector<double> residual_history;  // ||target - analog * digital||_F, round 0 = ||target||_F
};

enum class Scheme { svd_digital, svd_hybrid, gmd_digital, gmd_hybrid };

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);
bool is_gmd(Scheme s);
bool is_hybrid(Scheme s);

struct PrecoderBundle {
    Scheme scheme = Scheme::svd_digital;
    CMatrix precoder;                       // N_t x n_s
    CMatrix combiner;                       // N_r x n_s
    std::vector<double> subchannel_gains;   // sigma_i (SVD) or r_bar repeated (GMD)

    // Populated for hybrid schemes only.
    HybridFactor tx;
    HybridFactor rx;
};

/// Greedy matching pursuit of `target` over `dictionary` columns. Each round
/// picks the unselected column with the largest correlation energy against
/// the normalized residual, then refits the digital stage by least squares.
HybridFactor omp_factor(const CMatrix& target, const CMatrix& dictionary, int n_rf);

PrecoderBundle build_gmd_hybrid(const ChannelRealization& chan, int n_rf_t, int n_rf_r, int n_s);
PrecoderBundle build_svd_hybrid(const ChannelRealization& chan, int n_rf_t, int n_rf_r, int n_s);

enum class DigitalMode { svd, gmd };
PrecoderBundle build_fully_digital(const ChannelRealization& chan, int n_s, DigitalMode mode);

// Dispatch on scheme; the same n_rf is used at both ends.
PrecoderBundle build_bundle(const ChannelRealization& chan, Scheme scheme, int n_rf, int n_s);

}  // namespace gmdhp

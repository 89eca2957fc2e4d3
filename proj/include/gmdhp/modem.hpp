#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace gmdhp {

// Bits of one 16-QAM symbol in the low nibble: b0 is bit 3, b3 is bit 0.
// (b0 b1) select the in-phase level and (b2 b3) the quadrature level.
using Nibble = std::uint8_t;

inline constexpr int kBitsPerSymbol = 4;

/// Gray-coded square 16-QAM with unit average energy. Per dimension
/// 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, scaled by 1/sqrt(10).
std::complex<double> qam16_map(Nibble bits);

/// Nearest-point decision. Points on a decision boundary go to the more
/// negative level.
Nibble qam16_slice(std::complex<double> y);

/// Water-filling: p_i = max(0, mu - noise_power / gains_i^2) with sum p_i = total_power.
std::vector<double> water_fill(std::span<const double> gains, double total_power, double noise_power);

}  // namespace gmdhp

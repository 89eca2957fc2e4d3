#include "gmdhp/modem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gmdhp {

namespace {

const double kScale = 1.0 / std::sqrt(10.0);

// Gray pair -> PAM level.
constexpr double kLevel[4] = {-3.0, -1.0, 3.0, 1.0};  // index = (b_hi << 1) | b_lo

unsigned pam_slice(double x)
{
    // Thresholds at -2, 0, +2 in level units; ties resolve downward.
    const double v = x / kScale;
    if (v <= -2.0)
        return 0b00;
    if (v <= 0.0)
        return 0b01;
    if (v <= 2.0)
        return 0b11;
    return 0b10;
}

}  // namespace

std::complex<double> qam16_map(Nibble bits)
{
    const unsigned i_bits = (bits >> 2) & 0b11u;
    const unsigned q_bits = bits & 0b11u;
    return {kLevel[i_bits] * kScale, kLevel[q_bits] * kScale};
}

Nibble qam16_slice(std::complex<double> y)
{
    return static_cast<Nibble>((pam_slice(y.real()) << 2) | pam_slice(y.imag()));
}

std::vector<double> water_fill(std::span<const double> gains, double total_power, double noise_power)
{
    const std::size_t n = gains.size();
    if (n == 0)
        return {};
    if (!(total_power > 0.0) || !(noise_power > 0.0))
        throw std::invalid_argument("water_fill: power and noise must be positive");

    std::vector<double> floor(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(gains[i] > 0.0))
            throw std::invalid_argument("water_fill: gains must be positive");
        floor[i] = noise_power / (gains[i] * gains[i]);
    }

    std::vector<double> sorted = floor;
    std::sort(sorted.begin(), sorted.end());

    // Largest active set whose water level clears every member's floor.
    double level = 0.0;
    for (std::size_t active = n; active >= 1; --active) {
        const double sum = std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(active), 0.0);
        level = (total_power + sum) / static_cast<double>(active);
        if (level > sorted[active - 1])
            break;
    }

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = std::max(0.0, level - floor[i]);
    return p;
}

}  // namespace gmdhp

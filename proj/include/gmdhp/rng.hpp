#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace gmdhp {

// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds a key path into one seed: derive_seed(m, {a, b}) differs from derive_seed(m, {b, a}).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = mix64(master);
    for (auto k : keys)
        h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

// Seedable pseudo-random stream. Child streams are split off by key so that
// concurrent trials never share state.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    RandomStream split(std::initializer_list<std::uint64_t> keys) const
    {
        return RandomStream(derive_seed(seed_, keys));
    }

    double normal() { return normal_(engine_); }

    double uniform(double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    // CN(0, variance): (x + jy) * sqrt(variance / 2), x, y ~ N(0, 1).
    std::complex<double> complex_normal(double variance = 1.0)
    {
        const double scale = std::sqrt(variance / 2.0);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {re * scale, im * scale};
    }

    std::uint64_t bits() { return engine_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gmdhp

#include "gmdhp/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gmdhp {

void ArrayGeometry::validate() const
{
    if (n_elements < 1)
        throw std::invalid_argument("array needs at least one element, got " +
                                    std::to_string(n_elements));
    if (!(spacing_over_wavelength > 0.0))
        throw std::invalid_argument("element spacing must be positive");
}

void PathSet::validate() const
{
    if (gains.empty())
        throw std::invalid_argument("path set is empty");
    if (aod.size() != gains.size() || aoa.size() != gains.size())
        throw std::invalid_argument("path set lists have different lengths");
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (std::abs(aod[i]) > half_pi || std::abs(aoa[i]) > half_pi)
            throw std::invalid_argument("path angle outside [-pi/2, pi/2] at path " +
                                        std::to_string(i));
    }
}

CVector ula_response(const ArrayGeometry& geom, double angle)
{
    const int n = geom.n_elements;
    const double step = 2.0 * std::numbers::pi * geom.spacing_over_wavelength * std::sin(angle);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    CVector a(n);
    for (int m = 0; m < n; ++m)
        a(m) = std::polar(amp, step * m);
    return a;
}

ChannelRealization make_channel(const PathSet& paths, const ArrayGeometry& geom_t,
                                const ArrayGeometry& geom_r)
{
    geom_t.validate();
    geom_r.validate();
    paths.validate();

    const int n_t = geom_t.n_elements;
    const int n_r = geom_r.n_elements;
    const int n_paths = paths.count();

    ChannelRealization ch;
    ch.paths = paths;
    ch.A_t.resize(n_t, n_paths);
    ch.A_r.resize(n_r, n_paths);
    for (int i = 0; i < n_paths; ++i) {
        ch.A_t.col(i) = ula_response(geom_t, paths.aod[i]);
        ch.A_r.col(i) = ula_response(geom_r, paths.aoa[i]);
    }

    const double scale = std::sqrt(static_cast<double>(n_t) * n_r / n_paths);
    CVector weights(n_paths);
    for (int i = 0; i < n_paths; ++i)
        weights(i) = scale * paths.gains[i];
    ch.H = ch.A_r * weights.asDiagonal() * ch.A_t.adjoint();
    return ch;
}

ChannelRealization draw_channel(int n_paths, const ArrayGeometry& geom_t,
                                const ArrayGeometry& geom_r, RandomStream& rng)
{
    if (n_paths < 1)
        throw std::invalid_argument("channel needs at least one path");

    constexpr double half_pi = std::numbers::pi / 2.0;
    PathSet paths;
    paths.gains.reserve(n_paths);
    paths.aod.reserve(n_paths);
    paths.aoa.reserve(n_paths);
    for (int i = 0; i < n_paths; ++i) {
        paths.gains.push_back(rng.complex_normal());
        paths.aod.push_back(rng.uniform(-half_pi, half_pi));
        paths.aoa.push_back(rng.uniform(-half_pi, half_pi));
    }
    return make_channel(paths, geom_t, geom_r);
}

}  // namespace gmdhp

#pragma once

#include "gmdhp/linalg.hpp"
#include "gmdhp/rng.hpp"

#include <vector>

namespace gmdhp {

// Uniform linear array.
struct ArrayGeometry {
    int n_elements = 1;
    double spacing_over_wavelength = 0.5;

    void validate() const;
};

// Propagation paths of a narrowband Saleh-Valenzuela channel.
struct PathSet {
    std::vector<cplx> gains;   // complex path gain per path
    std::vector<double> aod;   // departure angle at the transmitter, radians
    std::vector<double> aoa;   // arrival angle at the receiver, radians

    int count() const { return static_cast<int>(gains.size()); }
    void validate() const;
};

struct ChannelRealization {
    CMatrix H;       // n_r x n_t
    PathSet paths;
    CMatrix A_t;     // n_t x L transmit steering dictionary
    CMatrix A_r;     // n_r x L receive steering dictionary
};

/// Unit-norm array response: element m is exp(j 2 pi (d/lambda) m sin(angle)) / sqrt(N).
CVector ula_response(const ArrayGeometry& geom, double angle);

/// Assemble H = sqrt(n_t n_r / L) * sum_i gain_i a_r(aoa_i) a_t(aod_i)^H from explicit paths.
ChannelRealization make_channel(const PathSet& paths, const ArrayGeometry& geom_t,
                                const ArrayGeometry& geom_r);

/// Random realization: CN(0,1) gains, angles uniform on [-pi/2, pi/2].
ChannelRealization draw_channel(int n_paths, const ArrayGeometry& geom_t,
                                const ArrayGeometry& geom_r, RandomStream& rng);

}  // namespace gmdhp

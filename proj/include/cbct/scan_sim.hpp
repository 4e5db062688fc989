#pragma once

#include <cstdint>
#include <vector>

#include "cbct/types.hpp"

namespace cbct {

/// Integer-pixel detector displacement of one view: the panel was at
/// (rows + drow, cols + dcol) relative to its nominal mount while that view
/// was exposed.
struct ViewShift {
    int drow = 0;
    int dcol = 0;
};

/// Everything about the exposure besides the geometry: photon budget, noise,
/// strike defects, and per-view panel shifts.
struct AcquisitionParams {
    double incident_counts = 1e4;   // I0, photons per pixel per view
    std::uint64_t rng_seed = 0;
    double impulse_rate = 0.0;      // fraction of pixels hit per view
    double impulse_amplitude = 0.0; // counts added by a strike
    bool enable_poisson = true;
    std::vector<ViewShift> shift_pattern; // empty = no shifts; else one per view

    void validate(int nviews) const;
};

/// Expected counts I0 * exp(-[Af]) per pixel, Poisson-sampled when enabled,
/// then impulse strikes added to a seeded random pixel subset, with each
/// view's shift applied to the ray positions.  The random stream is
/// partitioned per (view, pixel), so the result is deterministic for a given
/// seed at any thread count.  Expected counts above 1e6 use a Gaussian
/// approximation to the Poisson draw.
ProjectionStack simulate_counts(const Volume& vol, const ConeBeamGeometry& geom,
                                const AcquisitionParams& params);

/// Same pipeline with a zero volume (pure flat field), drawn from a separate
/// seed stream so open-beam noise is independent of the scan noise.
ProjectionStack simulate_open_beam(const ConeBeamGeometry& geom,
                                   const AcquisitionParams& params);

} // namespace cbct

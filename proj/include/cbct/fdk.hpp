#pragma once

#include "cbct/types.hpp"

namespace cbct {

enum class FdkFilter { ram_lak, hann };

struct FdkParams {
    FdkFilter filter_kind = FdkFilter::ram_lak;
    bool short_scan_weighting = false; // reserved; full scan only in v1
    VolumeGrid grid;                   // output grid
};

/// Filtering stage of the analytic reconstruction, exposed for inspection
/// and tests: cosine-weights each pixel, then convolves every detector row
/// with the band-limited spatial ramp
///   h[0] = 1/(4 d^2),  h[n odd] = -1/(pi^2 n^2 d^2),  h[n even] = 0
/// (d = pixel pitch scaled to the rotation axis), zero-padded to a power of
/// two at least twice the row width so the circular FFT convolution is
/// linear, and scaled by d/2.  An impulse row therefore filters to exactly
/// 0.5*d*h centered on the impulse.  The hann variant multiplies the ramp's
/// spectrum by 0.5*(1 + cos(pi k / (N/2))).
ProjectionStack fdk_filter_rows(const ProjectionStack& proj,
                                const ConeBeamGeometry& geom, FdkFilter kind);

/// Analytic cone-beam reconstruction from log-normalized projections:
/// per-view cosine weighting, FFT-based ramp filtering along detector rows
/// (zero-padded to at least twice the row width), then distance-weighted
/// backprojection scaled by the angular step.
///
/// Requires at least 2 views at uniform angular spacing covering the full
/// circle, and a nominal (unshifted) detector; shift correction happens
/// upstream.  Voxels outside the scanned field-of-view cylinder are zero.
/// Deterministic for any thread count.
Volume fdk_reconstruct(const ProjectionStack& proj, const ConeBeamGeometry& geom,
                       const FdkParams& params);

/// Radius (mm) of the cylinder actually covered by every view's fan; voxels
/// outside it are zeroed by fdk_reconstruct and excluded from default masks.
double fdk_fov_radius(const ConeBeamGeometry& geom);

} // namespace cbct

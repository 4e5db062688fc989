#pragma once

#include "cbct/types.hpp"

namespace cbct {

/// Cone-beam forward projection: line integrals of the volume along each
/// source-to-pixel-centre ray, in the units of volume * mm.
/// Deterministic for any thread count (each ray writes one output pixel).
ProjectionStack forward_project(const Volume& vol, const ConeBeamGeometry& geom);

/// Exact transpose of forward_project: scatters each projection sample back
/// along its ray, weighted by the same intersection lengths the forward
/// traversal produces.  Deterministic for any thread count (per-view partial
/// volumes are merged in ascending view order).
Volume back_project(const ProjectionStack& proj, const ConeBeamGeometry& geom,
                    const VolumeGrid& grid);

/// back_project restricted to samples with w > 0:
/// result = A^T diag(w) r, skipping zero-weight pixels entirely so their
/// projection values can never influence the output.
Volume back_project_weighted(const ProjectionStack& r, const ProjectionStack& w,
                             const ConeBeamGeometry& geom, const VolumeGrid& grid);

} // namespace cbct

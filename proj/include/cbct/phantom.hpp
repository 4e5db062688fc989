#pragma once

#include <vector>

#include "cbct/types.hpp"

namespace cbct {

/// One concentric spherical layer.  Layers are listed innermost first with
/// strictly increasing outer radii; layer i occupies the radii between the
/// previous layer's outer_radius and its own.
struct ShellSpec {
    double outer_radius = 0.0; // mm
    double attenuation = 0.0;  // 1/mm
};

/// Spherical air pocket carved out of the layers (takes the background
/// attenuation).
struct DefectSpec {
    Vec3 center;
    double radius = 0.0; // mm
};

/// Core-shell spherical particle: a strongly attenuating kernel wrapped in
/// cladding layers, plus optional void defects.
struct TrisoPhantomSpec {
    Vec3 center;
    std::vector<ShellSpec> shells; // innermost (kernel) first
    double background_attenuation = 0.0;
    std::vector<DefectSpec> defects; // assumed pairwise disjoint

    void validate() const;
    /// Attenuation at a point: innermost shell containing it, defects and
    /// everything outside the outermost shell take the background value.
    double attenuation_at(const Vec3& p) const;
};

/// Samples the phantom on the grid: each voxel takes the attenuation at its
/// centre point (no partial-volume blending).  Deterministic.
Volume rasterize_phantom(const TrisoPhantomSpec& spec, const VolumeGrid& grid);

/// Exact line integral of (attenuation - background) along the ray
/// origin + t * direction, t >= 0; with zero background this is the plain
/// attenuation integral.  Computed analytically from ray/sphere chord
/// lengths (nested-spheres decomposition); defects are subtracted via
/// interval intersections, which is exact when defects do not overlap each
/// other.
double phantom_line_integral(const TrisoPhantomSpec& spec, const Vec3& origin,
                             const Vec3& direction);

} // namespace cbct

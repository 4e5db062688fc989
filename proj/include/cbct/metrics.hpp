#pragma once

#include <cstdint>
#include <vector>

#include "cbct/types.hpp"

namespace cbct {

/// Boolean field over a VolumeGrid selecting the voxels a metric covers.
struct RegionMask {
    VolumeGrid grid;
    std::vector<std::uint8_t> inside;

    RegionMask() = default;
    explicit RegionMask(const VolumeGrid& g) : grid(g), inside(g.voxel_count(), 0) {}
    std::size_t count() const;
};

/// Interior cylinder inscribed in the grid (radius shrunk by `margin` mm,
/// about the grid's central axis), minus a ball of exclude_radius around
/// exclude_center.  Pass exclude_radius = 0 for no exclusion.
RegionMask make_interior_mask(const VolumeGrid& grid, double margin,
                              const Vec3& exclude_center, double exclude_radius);

/// Ball of the given radius: convenience for probing one uniform shell.
RegionMask make_ball_mask(const VolumeGrid& grid, const Vec3& center, double radius);

/// Spherical annulus r_inner <= |p - center| <= r_outer.
RegionMask make_shell_mask(const VolumeGrid& grid, const Vec3& center,
                           double r_inner, double r_outer);

/// ||(x - reference) restricted to mask||_2 / ||reference restricted to
/// mask||_2.  The normalizer is the reference norm over the mask (recorded
/// in report headers); not symmetric in (x, reference).  Rejects an
/// identically zero reference on the mask.
double nrmse(const Volume& x, const Volume& reference, const RegionMask& mask);

/// Population standard deviation of the volume over the mask.
double region_stddev(const Volume& vol, const RegionMask& mask);

struct ProfileSample {
    double position = 0.0; // mm from the start voxel centre
    double value = 0.0;
};

struct VoxelIndex {
    int ix = 0, iy = 0, iz = 0;
};

/// Values at voxel centres along the discrete 3D Bresenham line from start
/// to end (inclusive), with positions measured in mm along the line.
std::vector<ProfileSample> extract_line_profile(const Volume& vol,
                                                const VoxelIndex& start,
                                                const VoxelIndex& end);

} // namespace cbct

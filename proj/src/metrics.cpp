#include "cbct/metrics.hpp"

#include <cmath>
#include <cstdlib>

namespace cbct {

std::size_t RegionMask::count() const {
    std::size_t n = 0;
    for (auto b : inside) n += b ? 1 : 0;
    return n;
}

RegionMask make_interior_mask(const VolumeGrid& grid, double margin,
                              const Vec3& exclude_center, double exclude_radius) {
    RegionMask m(grid);
    const double cx = grid.origin.x + 0.5 * grid.nx * grid.voxel_size;
    const double cy = grid.origin.y + 0.5 * grid.ny * grid.voxel_size;
    const double r_cyl =
        0.5 * std::min(grid.nx, grid.ny) * grid.voxel_size - margin;
    for (int iz = 0; iz < grid.nz; ++iz) {
        for (int iy = 0; iy < grid.ny; ++iy) {
            for (int ix = 0; ix < grid.nx; ++ix) {
                const Vec3 p = grid.voxel_center(ix, iy, iz);
                const double dx = p.x - cx, dy = p.y - cy;
                if (dx * dx + dy * dy > r_cyl * r_cyl) continue;
                if (exclude_radius > 0.0) {
                    const Vec3 q = p - exclude_center;
                    if (dot(q, q) <= exclude_radius * exclude_radius) continue;
                }
                m.inside[grid.index(ix, iy, iz)] = 1;
            }
        }
    }
    return m;
}

RegionMask make_ball_mask(const VolumeGrid& grid, const Vec3& center, double radius) {
    return make_shell_mask(grid, center, 0.0, radius);
}

RegionMask make_shell_mask(const VolumeGrid& grid, const Vec3& center,
                           double r_inner, double r_outer) {
    RegionMask m(grid);
    for (int iz = 0; iz < grid.nz; ++iz) {
        for (int iy = 0; iy < grid.ny; ++iy) {
            for (int ix = 0; ix < grid.nx; ++ix) {
                const Vec3 q = grid.voxel_center(ix, iy, iz) - center;
                const double r2 = dot(q, q);
                if (r2 >= r_inner * r_inner && r2 <= r_outer * r_outer)
                    m.inside[grid.index(ix, iy, iz)] = 1;
            }
        }
    }
    return m;
}

double nrmse(const Volume& x, const Volume& reference, const RegionMask& mask) {
    if (!(x.grid == reference.grid) || !(x.grid == mask.grid))
        throw config_error("nrmse: grid mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        if (!mask.inside[i]) continue;
        const double d = x.data[i] - reference.data[i];
        num += d * d;
        den += reference.data[i] * reference.data[i];
    }
    if (den == 0.0)
        throw config_error("nrmse: reference is identically zero on the mask");
    return std::sqrt(num / den);
}

double region_stddev(const Volume& vol, const RegionMask& mask) {
    if (!(vol.grid == mask.grid)) throw config_error("region_stddev: grid mismatch");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < vol.data.size(); ++i) {
        if (!mask.inside[i]) continue;
        sum += vol.data[i];
        ++n;
    }
    if (n == 0) throw config_error("region_stddev: empty mask");
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < vol.data.size(); ++i) {
        if (!mask.inside[i]) continue;
        const double d = vol.data[i] - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n));
}

std::vector<ProfileSample> extract_line_profile(const Volume& vol,
                                                const VoxelIndex& start,
                                                const VoxelIndex& end) {
    const VolumeGrid& g = vol.grid;
    auto in_grid = [&](const VoxelIndex& v) {
        return v.ix >= 0 && v.ix < g.nx && v.iy >= 0 && v.iy < g.ny && v.iz >= 0 &&
               v.iz < g.nz;
    };
    if (!in_grid(start) || !in_grid(end))
        throw config_error("extract_line_profile: endpoints outside grid");

    // 3D Bresenham: step the dominant axis every sample, others by error
    // accumulation.
    const int dx = std::abs(end.ix - start.ix);
    const int dy = std::abs(end.iy - start.iy);
    const int dz = std::abs(end.iz - start.iz);
    const int sx = end.ix >= start.ix ? 1 : -1;
    const int sy = end.iy >= start.iy ? 1 : -1;
    const int sz = end.iz >= start.iz ? 1 : -1;
    const int dmax = std::max(dx, std::max(dy, dz));

    std::vector<ProfileSample> prof;
    prof.reserve(static_cast<std::size_t>(dmax) + 1);
    const Vec3 p0 = g.voxel_center(start.ix, start.iy, start.iz);

    int x = start.ix, y = start.iy, z = start.iz;
    int ex = 2 * dx - dmax, ey = 2 * dy - dmax, ez = 2 * dz - dmax;
    for (int i = 0;; ++i) {
        const Vec3 p = g.voxel_center(x, y, z);
        prof.push_back({norm(p - p0), vol.at(x, y, z)});
        if (i == dmax) break;
        if (ex > 0) { x += sx; ex -= 2 * dmax; }
        if (ey > 0) { y += sy; ey -= 2 * dmax; }
        if (ez > 0) { z += sz; ez -= 2 * dmax; }
        ex += 2 * dx;
        ey += 2 * dy;
        ez += 2 * dz;
    }
    return prof;
}

} // namespace cbct

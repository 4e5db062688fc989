#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "cbct/types.hpp"

namespace cbct {

/// Walks the voxels pierced by the segment p0 -> p1 and calls
/// visit(linear_voxel_index, intersection_length_mm) once per voxel, in
/// order of increasing distance from p0.
///
/// This single traversal is the only place ray/grid intersection lengths
/// are computed.  Forward projection sums  f[idx] * len  over the visits;
/// back projection scatters  len * value  over the very same visits, so
/// the two operators are exact transposes of each other by construction.
template <class Visitor>
inline void trace_ray(const VolumeGrid& g, const Vec3& p0, const Vec3& p1,
                      Visitor&& visit) {
    const double dx = p1.x - p0.x, dy = p1.y - p0.y, dz = p1.z - p0.z;
    const double ray_len = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (ray_len == 0.0) return;

    const double h = g.voxel_size;
    constexpr double inf = std::numeric_limits<double>::infinity();

    // Clip the segment (parameter t in [0,1]) against the volume box.
    double t_enter = 0.0, t_exit = 1.0;
    const double lo[3] = {g.origin.x, g.origin.y, g.origin.z};
    const double hi[3] = {g.origin.x + g.nx * h, g.origin.y + g.ny * h,
                          g.origin.z + g.nz * h};
    const double p[3] = {p0.x, p0.y, p0.z};
    const double d[3] = {dx, dy, dz};
    for (int a = 0; a < 3; ++a) {
        if (d[a] != 0.0) {
            double t0 = (lo[a] - p[a]) / d[a];
            double t1 = (hi[a] - p[a]) / d[a];
            if (t0 > t1) std::swap(t0, t1);
            if (t0 > t_enter) t_enter = t0;
            if (t1 < t_exit) t_exit = t1;
        } else if (p[a] < lo[a] || p[a] >= hi[a]) {
            return;
        }
    }
    if (t_enter >= t_exit) return;

    // Entry voxel, clamped to guard against boundary rounding.
    const double qx = p0.x + t_enter * dx;
    const double qy = p0.y + t_enter * dy;
    const double qz = p0.z + t_enter * dz;
    auto cell = [h](double q, double o, int n) {
        int i = static_cast<int>(std::floor((q - o) / h));
        if (i < 0) i = 0;
        if (i >= n) i = n - 1;
        return i;
    };
    int ix = cell(qx, g.origin.x, g.nx);
    int iy = cell(qy, g.origin.y, g.ny);
    int iz = cell(qz, g.origin.z, g.nz);

    // Per-axis parametric stepping state.
    int step_x, step_y, step_z;
    double t_next_x, t_next_y, t_next_z, t_dx, t_dy, t_dz;
    auto setup = [&](double dir, double org, double start, int i, int& step,
                     double& t_next, double& t_delta) {
        if (dir > 0.0) {
            step = 1;
            t_delta = h / dir;
            t_next = (org + (i + 1) * h - start) / dir;
        } else if (dir < 0.0) {
            step = -1;
            t_delta = -h / dir;
            t_next = (org + i * h - start) / dir;
        } else {
            step = 0;
            t_delta = inf;
            t_next = inf;
        }
    };
    setup(dx, g.origin.x, p0.x, ix, step_x, t_next_x, t_dx);
    setup(dy, g.origin.y, p0.y, iy, step_y, t_next_y, t_dy);
    setup(dz, g.origin.z, p0.z, iz, step_z, t_next_z, t_dz);

    double t_cur = t_enter;
    while (t_cur < t_exit) {
        double t_step = t_next_x;
        int axis = 0;
        if (t_next_y < t_step) { t_step = t_next_y; axis = 1; }
        if (t_next_z < t_step) { t_step = t_next_z; axis = 2; }
        if (t_step > t_exit) t_step = t_exit;

        const double seg = (t_step - t_cur) * ray_len;
        if (seg > 0.0) visit(g.index(ix, iy, iz), seg);
        if (t_step >= t_exit) break;

        if (axis == 0) {
            ix += step_x;
            if (ix < 0 || ix >= g.nx) break;
            t_next_x += t_dx;
        } else if (axis == 1) {
            iy += step_y;
            if (iy < 0 || iy >= g.ny) break;
            t_next_y += t_dy;
        } else {
            iz += step_z;
            if (iz < 0 || iz >= g.nz) break;
            t_next_z += t_dz;
        }
        t_cur = t_step;
    }
}

} // namespace cbct

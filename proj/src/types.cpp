#include "cbct/types.hpp"

#include <cmath>

namespace cbct {

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

VolumeGrid make_centered_grid(int nx, int ny, int nz, double voxel_size) {
    VolumeGrid g;
    g.nx = nx;
    g.ny = ny;
    g.nz = nz;
    g.voxel_size = voxel_size;
    g.origin = {-0.5 * nx * voxel_size, -0.5 * ny * voxel_size, -0.5 * nz * voxel_size};
    return g;
}

Vec3 ConeBeamGeometry::source_position(int v) const {
    const double beta = view_angles[static_cast<std::size_t>(v)];
    return {source_to_axis * std::cos(beta), source_to_axis * std::sin(beta), 0.0};
}

Vec3 ConeBeamGeometry::pixel_center(int v, int r, int c, double extra_drow,
                                    double extra_dcol) const {
    const double beta = view_angles[static_cast<std::size_t>(v)];
    const double cb = std::cos(beta), sb = std::sin(beta);
    const Vec3 src{source_to_axis * cb, source_to_axis * sb, 0.0};
    const Vec3 dir{-cb, -sb, 0.0};
    const Vec3 u_axis{-sb, cb, 0.0};
    const Vec3 v_axis{0.0, 0.0, 1.0};
    const Vec3 principal = src + source_to_detector * dir;
    const double u_off =
        (c - 0.5 * (det_cols - 1) + shift_cols + extra_dcol) * pixel_pitch;
    const double v_off =
        (r - 0.5 * (det_rows - 1) + shift_rows + extra_drow) * pixel_pitch;
    return principal + u_off * u_axis + v_off * v_axis;
}

void ConeBeamGeometry::validate() const {
    if (source_to_axis <= 0.0)
        throw config_error("geometry: source_to_axis must be positive");
    if (source_to_detector <= source_to_axis)
        throw config_error("geometry: source_to_detector must exceed source_to_axis");
    if (det_rows < 1 || det_cols < 1)
        throw config_error("geometry: detector must have at least one pixel");
    if (pixel_pitch <= 0.0)
        throw config_error("geometry: pixel_pitch must be positive");
    if (view_angles.empty())
        throw config_error("geometry: at least one view angle required");
}

std::vector<double> uniform_view_angles(int nviews) {
    if (nviews < 1) throw config_error("uniform_view_angles: nviews must be >= 1");
    std::vector<double> a(static_cast<std::size_t>(nviews));
    const double step = 2.0 * 3.14159265358979323846 / nviews;
    for (int v = 0; v < nviews; ++v) a[static_cast<std::size_t>(v)] = step * v;
    return a;
}

} // namespace cbct

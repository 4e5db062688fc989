#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cbct/errors.hpp"

namespace cbct {

// ---------------------------------------------------------------------------
// Coordinate and storage conventions (single source of truth)
//
// World frame: right-handed x/y/z in millimetres; the rotation axis is z and
// passes through the origin.
//
// Source and detector at view angle beta (radians):
//   source position     S = ( R cos(beta),  R sin(beta), 0 ),   R = source_to_axis
//   central-ray dir     c = -( cos(beta), sin(beta), 0 )        (source toward axis)
//   detector column dir u = ( -sin(beta), cos(beta), 0 )
//   detector row dir    v = ( 0, 0, 1 )
//   principal point     P = S + D * c,                          D = source_to_detector
// Pixel (row r, col c) has centre
//   P + u_off * u + v_off * v
//   u_off = (c - (ncols-1)/2 + shift_cols) * pixel_pitch
//   v_off = (r - (nrows-1)/2 + shift_rows) * pixel_pitch
// shift_rows/shift_cols model a rigid in-plane misplacement of the panel, in
// pixel units; zero means the principal ray hits the exact panel centre.
//
// Volume voxels are cubes of edge grid.voxel_size; grid.origin is the minimum
// corner of the volume (not a voxel centre).  Voxel (ix,iy,iz) occupies
//   [origin + i*h, origin + (i+1)*h) per axis
// and is stored x-fastest:  index = ix + nx*(iy + ny*iz).
//
// Projections are stored pixel-row-fastest-in-column order per view:
//   index = c + ncols*(r + nrows*view)    i.e. row-major images, view-major.
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    bool operator==(const Vec3&) const = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Vec3 a);

/// Axis-aligned voxel lattice.
struct VolumeGrid {
    int nx = 0, ny = 0, nz = 0;
    double voxel_size = 1.0;     // mm, cubic voxels
    Vec3 origin;                 // minimum corner, mm

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(iy) +
                    static_cast<std::size_t>(ny) * static_cast<std::size_t>(iz));
    }
    Vec3 voxel_center(int ix, int iy, int iz) const {
        return {origin.x + (ix + 0.5) * voxel_size,
                origin.y + (iy + 0.5) * voxel_size,
                origin.z + (iz + 0.5) * voxel_size};
    }
    bool operator==(const VolumeGrid&) const = default;
};

/// Grid of the given shape centred on the rotation axis and on z = 0.
VolumeGrid make_centered_grid(int nx, int ny, int nz, double voxel_size);

/// Scalar field sampled on a VolumeGrid (attenuation in 1/mm unless noted).
/// Samples are double in memory; the raw file format is float32.
struct Volume {
    VolumeGrid grid;
    std::vector<double> data;

    Volume() = default;
    explicit Volume(const VolumeGrid& g) : grid(g), data(g.voxel_count(), 0.0) {}

    double& at(int ix, int iy, int iz) { return data[grid.index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return data[grid.index(ix, iy, iz)]; }
};

/// Circular cone-beam acquisition geometry.
struct ConeBeamGeometry {
    double source_to_axis = 0.0;      // R, mm
    double source_to_detector = 0.0;  // D, mm
    int det_rows = 0;
    int det_cols = 0;
    double pixel_pitch = 0.0;         // mm, square pixels
    std::vector<double> view_angles;  // radians, one per view
    double shift_rows = 0.0;          // panel misplacement, pixel units
    double shift_cols = 0.0;

    int view_count() const { return static_cast<int>(view_angles.size()); }
    std::size_t pixels_per_view() const {
        return static_cast<std::size_t>(det_rows) * static_cast<std::size_t>(det_cols);
    }
    std::size_t total_pixels() const { return pixels_per_view() * view_angles.size(); }

    /// Source position at view v.
    Vec3 source_position(int v) const;
    /// Centre of detector pixel (r, c) at view v, including the panel shift.
    /// extra_drow/extra_dcol add a per-view displacement (pixel units) on
    /// top of the global shift; the simulator uses this for acquisition
    /// shift patterns.
    Vec3 pixel_center(int v, int r, int c, double extra_drow = 0.0,
                      double extra_dcol = 0.0) const;

    void validate() const;
};

/// Evenly spaced angles [0, 2*pi), i.e. beta_v = 2*pi*v/nviews.
std::vector<double> uniform_view_angles(int nviews);

/// Per-pixel data for every view of a scan.  Meaning of a sample depends on
/// context: photon counts, log-transmission line integrals, or weights.
struct ProjectionStack {
    int nviews = 0, nrows = 0, ncols = 0;
    std::vector<double> data;

    ProjectionStack() = default;
    ProjectionStack(int views, int rows, int cols)
        : nviews(views), nrows(rows), ncols(cols),
          data(static_cast<std::size_t>(views) * rows * cols, 0.0) {}

    std::size_t index(int v, int r, int c) const {
        return static_cast<std::size_t>(c) +
               static_cast<std::size_t>(ncols) *
                   (static_cast<std::size_t>(r) +
                    static_cast<std::size_t>(nrows) * static_cast<std::size_t>(v));
    }
    double& at(int v, int r, int c) { return data[index(v, r, c)]; }
    double at(int v, int r, int c) const { return data[index(v, r, c)]; }
    bool same_shape(const ProjectionStack& o) const {
        return nviews == o.nviews && nrows == o.nrows && ncols == o.ncols;
    }
};

/// Statistical weights for the data term, same layout as the projections
/// they weight.  threshold_used records the photon-count cutoff applied
/// (0 = none), so downstream reports can state it.
struct WeightSet {
    ProjectionStack w;
    double threshold_used = 0.0;
};

} // namespace cbct

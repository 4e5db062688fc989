#include "cbct/geometry.hpp"

#include <vector>

#include "cbct/parallel.hpp"
#include "cbct/raytrace.hpp"

namespace cbct {

ProjectionStack forward_project(const Volume& vol, const ConeBeamGeometry& geom) {
    geom.validate();
    ProjectionStack proj(geom.view_count(), geom.det_rows, geom.det_cols);
    const VolumeGrid& g = vol.grid;
    parallel_for(0, static_cast<std::size_t>(geom.view_count()), [&](std::size_t v) {
        const Vec3 src = geom.source_position(static_cast<int>(v));
        for (int r = 0; r < geom.det_rows; ++r) {
            for (int c = 0; c < geom.det_cols; ++c) {
                const Vec3 px = geom.pixel_center(static_cast<int>(v), r, c);
                double acc = 0.0;
                trace_ray(g, src, px, [&](std::size_t idx, double len) {
                    acc += vol.data[idx] * len;
                });
                proj.at(static_cast<int>(v), r, c) = acc;
            }
        }
    });
    return proj;
}

namespace {

// Shared implementation: per-view scatter into a scratch volume, then an
// ordered merge so accumulation order (and therefore every bit of the
// output) is independent of the thread count.
template <class PixelWeight>
Volume back_project_impl(const ConeBeamGeometry& geom, const VolumeGrid& grid,
                         PixelWeight&& pixel_value) {
    geom.validate();
    Volume out(grid);
    const std::size_t nvox = grid.voxel_count();

    // Each view scatters into its own scratch volume; the buffers are merged
    // into `out` in ascending view order.  Using the same per-view summation
    // structure at every thread count keeps the output byte-identical
    // whether the views run sequentially or in parallel.
    std::vector<std::vector<double>> scratch(
        static_cast<std::size_t>(geom.view_count()));
    ordered_parallel_views(
        static_cast<std::size_t>(geom.view_count()),
        [&](std::size_t sv) {
            const int v = static_cast<int>(sv);
            auto& buf = scratch[sv];
            buf.assign(nvox, 0.0);
            const Vec3 src = geom.source_position(v);
            for (int r = 0; r < geom.det_rows; ++r) {
                for (int c = 0; c < geom.det_cols; ++c) {
                    double val;
                    if (!pixel_value(v, r, c, val)) continue;
                    const Vec3 px = geom.pixel_center(v, r, c);
                    trace_ray(grid, src, px, [&](std::size_t idx, double len) {
                        buf[idx] += len * val;
                    });
                }
            }
        },
        [&](std::size_t sv) {
            auto& buf = scratch[sv];
            for (std::size_t i = 0; i < nvox; ++i) out.data[i] += buf[i];
            buf.clear();
            buf.shrink_to_fit();
        });
    return out;
}

} // namespace

Volume back_project(const ProjectionStack& proj, const ConeBeamGeometry& geom,
                    const VolumeGrid& grid) {
    if (proj.nviews != geom.view_count() || proj.nrows != geom.det_rows ||
        proj.ncols != geom.det_cols)
        throw config_error("back_project: projection shape does not match geometry");
    return back_project_impl(geom, grid,
                             [&](int v, int r, int c, double& val) {
                                 val = proj.at(v, r, c);
                                 return true;
                             });
}

Volume back_project_weighted(const ProjectionStack& r, const ProjectionStack& w,
                             const ConeBeamGeometry& geom, const VolumeGrid& grid) {
    if (!r.same_shape(w))
        throw config_error("back_project_weighted: residual/weight shape mismatch");
    if (r.nviews != geom.view_count() || r.nrows != geom.det_rows ||
        r.ncols != geom.det_cols)
        throw config_error("back_project_weighted: shape does not match geometry");
    return back_project_impl(geom, grid,
                             [&](int v, int row, int col, double& val) {
                                 const double wi = w.at(v, row, col);
                                 if (!(wi > 0.0)) return false;
                                 val = wi * r.at(v, row, col);
                                 return true;
                             });
}

} // namespace cbct

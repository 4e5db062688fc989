#include "cbct/fdk.hpp"

#include <fftw3.h>

#include <cmath>
#include <vector>

#include "cbct/parallel.hpp"

namespace cbct {

namespace {

constexpr double kPi = 3.14159265358979323846;

int next_pow2_at_least(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

void validate_fdk_inputs(const ProjectionStack& proj, const ConeBeamGeometry& geom,
                         const FdkParams& params) {
    geom.validate();
    if (params.short_scan_weighting)
        throw config_error("fdk: short-scan weighting is reserved; full scan only");
    if (geom.shift_rows != 0.0 || geom.shift_cols != 0.0)
        throw config_error("fdk: detector shifts must be corrected before FDK");
    if (proj.nviews != geom.view_count() || proj.nrows != geom.det_rows ||
        proj.ncols != geom.det_cols)
        throw config_error("fdk: projection shape does not match geometry");
    const int n = geom.view_count();
    if (n < 2) throw config_error("fdk: need at least 2 views");
    const double step = 2.0 * kPi / n;
    for (int v = 0; v < n; ++v) {
        const double expected = geom.view_angles[0] + step * v;
        if (std::abs(geom.view_angles[static_cast<std::size_t>(v)] - expected) >
            1e-9 * (1.0 + std::abs(expected)))
            throw config_error("fdk: view angles must be uniform over the full circle");
    }
    if (params.grid.nx < 1 || params.grid.ny < 1 || params.grid.nz < 1 ||
        params.grid.voxel_size <= 0.0)
        throw config_error("fdk: invalid output grid");
}

} // namespace

double fdk_fov_radius(const ConeBeamGeometry& geom) {
    const double R = geom.source_to_axis;
    const double d = geom.pixel_pitch * R / geom.source_to_detector;
    const double u_max = 0.5 * (geom.det_cols - 1) * d;
    return R * u_max / std::sqrt(R * R + u_max * u_max);
}

ProjectionStack fdk_filter_rows(const ProjectionStack& proj,
                                const ConeBeamGeometry& geom, FdkFilter kind) {
    geom.validate();
    if (proj.nviews != geom.view_count() || proj.nrows != geom.det_rows ||
        proj.ncols != geom.det_cols)
        throw config_error("fdk: projection shape does not match geometry");

    const int nviews = geom.view_count();
    const int nrows = geom.det_rows;
    const int ncols = geom.det_cols;
    const double D = geom.source_to_detector;
    const double d = geom.pixel_pitch * geom.source_to_axis / D; // virtual spacing

    // Cosine pre-weight per pixel (same for every view).
    std::vector<double> cosw(static_cast<std::size_t>(nrows) * ncols);
    for (int r = 0; r < nrows; ++r) {
        const double voff = (r - 0.5 * (nrows - 1)) * geom.pixel_pitch;
        for (int c = 0; c < ncols; ++c) {
            const double uoff = (c - 0.5 * (ncols - 1)) * geom.pixel_pitch;
            cosw[static_cast<std::size_t>(r) * ncols + c] =
                D / std::sqrt(D * D + uoff * uoff + voff * voff);
        }
    }

    // Band-limited ramp kernel sampled at the virtual spacing:
    //   h[0] = 1/(4d^2), h[n odd] = -1/(pi^2 n^2 d^2), h[n even] = 0,
    // truncated at |n| < ncols and embedded in a circular buffer of length
    // N >= 2*ncols so the convolution over the detector row is linear.
    const int N = next_pow2_at_least(2 * ncols);
    const int nspec = N / 2 + 1;
    std::vector<double> kernel(static_cast<std::size_t>(N), 0.0);
    kernel[0] = 1.0 / (4.0 * d * d);
    for (int n = 1; n < ncols; ++n) {
        if (n % 2 == 0) continue;
        const double val = -1.0 / (kPi * kPi * n * n * d * d);
        kernel[static_cast<std::size_t>(n)] = val;
        kernel[static_cast<std::size_t>(N - n)] = val;
    }

    std::vector<fftw_complex> kernel_spec(static_cast<std::size_t>(nspec));
    fftw_plan kplan = fftw_plan_dft_r2c_1d(N, kernel.data(), kernel_spec.data(),
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_execute(kplan);
    fftw_destroy_plan(kplan);
    if (kind == FdkFilter::hann) {
        for (int k = 0; k < nspec; ++k) {
            const double w = 0.5 * (1.0 + std::cos(kPi * k / (N / 2)));
            kernel_spec[static_cast<std::size_t>(k)][0] *= w;
            kernel_spec[static_cast<std::size_t>(k)][1] *= w;
        }
    }

    // Shared plans, executed with per-view buffers (new-array interface).
    std::vector<double> plan_real(static_cast<std::size_t>(N), 0.0);
    std::vector<fftw_complex> plan_cplx(static_cast<std::size_t>(nspec));
    fftw_plan fwd = fftw_plan_dft_r2c_1d(N, plan_real.data(), plan_cplx.data(),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(N, plan_cplx.data(), plan_real.data(),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);

    ProjectionStack filtered(nviews, nrows, ncols);
    parallel_for(0, static_cast<std::size_t>(nviews), [&](std::size_t sv) {
        const int v = static_cast<int>(sv);
        std::vector<double> row(static_cast<std::size_t>(N));
        std::vector<fftw_complex> spec(static_cast<std::size_t>(nspec));
        for (int r = 0; r < nrows; ++r) {
            for (int c = 0; c < ncols; ++c)
                row[static_cast<std::size_t>(c)] =
                    proj.at(v, r, c) * cosw[static_cast<std::size_t>(r) * ncols + c];
            std::fill(row.begin() + ncols, row.end(), 0.0);
            fftw_execute_dft_r2c(fwd, row.data(), spec.data());
            for (int k = 0; k < nspec; ++k) {
                const double re = spec[static_cast<std::size_t>(k)][0];
                const double im = spec[static_cast<std::size_t>(k)][1];
                const double kre = kernel_spec[static_cast<std::size_t>(k)][0];
                const double kim = kernel_spec[static_cast<std::size_t>(k)][1];
                spec[static_cast<std::size_t>(k)][0] = re * kre - im * kim;
                spec[static_cast<std::size_t>(k)][1] = re * kim + im * kre;
            }
            fftw_execute_dft_c2r(bwd, spec.data(), row.data());
            // 0.5 * d * convolution, plus the 1/N of the unnormalized FFT pair.
            const double scale = 0.5 * d / N;
            for (int c = 0; c < ncols; ++c)
                filtered.at(v, r, c) = row[static_cast<std::size_t>(c)] * scale;
        }
    });
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    return filtered;
}

Volume fdk_reconstruct(const ProjectionStack& proj, const ConeBeamGeometry& geom,
                       const FdkParams& params) {
    validate_fdk_inputs(proj, geom, params);

    const int nviews = geom.view_count();
    const int nrows = geom.det_rows;
    const int ncols = geom.det_cols;
    const double R = geom.source_to_axis;
    const double d = geom.pixel_pitch * R / geom.source_to_detector;
    const double dbeta = 2.0 * kPi / nviews;

    const ProjectionStack filtered = fdk_filter_rows(proj, geom, params.filter_kind);

    // Distance-weighted backprojection onto the grid, accumulated per voxel
    // in fixed view order (deterministic at any thread count).
    Volume out(params.grid);
    const VolumeGrid& g = params.grid;
    const double r_fov = fdk_fov_radius(geom);
    std::vector<double> cosb(static_cast<std::size_t>(nviews));
    std::vector<double> sinb(static_cast<std::size_t>(nviews));
    for (int v = 0; v < nviews; ++v) {
        cosb[static_cast<std::size_t>(v)] = std::cos(geom.view_angles[static_cast<std::size_t>(v)]);
        sinb[static_cast<std::size_t>(v)] = std::sin(geom.view_angles[static_cast<std::size_t>(v)]);
    }

    parallel_for(0, static_cast<std::size_t>(g.nz), [&](std::size_t szi) {
        const int iz = static_cast<int>(szi);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                const Vec3 p = g.voxel_center(ix, iy, iz);
                if (p.x * p.x + p.y * p.y >= r_fov * r_fov) continue;
                double acc = 0.0;
                for (int v = 0; v < nviews; ++v) {
                    const double cb = cosb[static_cast<std::size_t>(v)];
                    const double sb = sinb[static_cast<std::size_t>(v)];
                    const double U = R - p.x * cb - p.y * sb;
                    if (U <= 0.0) continue;
                    const double ut = R * (-p.x * sb + p.y * cb) / U;
                    const double vt = R * p.z / U;
                    const double col_f = ut / d + 0.5 * (ncols - 1);
                    const double row_f = vt / d + 0.5 * (nrows - 1);
                    const int c0 = static_cast<int>(std::floor(col_f));
                    const int r0 = static_cast<int>(std::floor(row_f));
                    const double fc = col_f - c0;
                    const double fr = row_f - r0;
                    double sample = 0.0;
                    for (int dr = 0; dr <= 1; ++dr) {
                        const int rr = r0 + dr;
                        if (rr < 0 || rr >= nrows) continue;
                        const double wr = dr ? fr : 1.0 - fr;
                        for (int dc = 0; dc <= 1; ++dc) {
                            const int cc = c0 + dc;
                            if (cc < 0 || cc >= ncols) continue;
                            const double wc = dc ? fc : 1.0 - fc;
                            sample += wr * wc * filtered.at(v, rr, cc);
                        }
                    }
                    acc += (R * R) / (U * U) * sample;
                }
                out.at(ix, iy, iz) = acc * dbeta;
            }
        }
    });
    return out;
}

} // namespace cbct

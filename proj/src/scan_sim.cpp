#include "cbct/scan_sim.hpp"

#include <cmath>
#include <random>

#include "cbct/parallel.hpp"
#include "cbct/random.hpp"
#include "cbct/raytrace.hpp"

namespace cbct {

namespace {

// Expected counts above this use a Gaussian approximation to the Poisson
// draw (mean lambda, stddev sqrt(lambda), rounded, clamped at zero).
constexpr double kGaussianApproxThreshold = 1e6;

double sample_counts(double lambda, SplitMix64& rng) {
    if (lambda <= 0.0) return 0.0;
    if (lambda > kGaussianApproxThreshold) {
        std::normal_distribution<double> n(lambda, std::sqrt(lambda));
        double v = std::round(n(rng));
        return v < 0.0 ? 0.0 : v;
    }
    std::poisson_distribution<long long> p(lambda);
    return static_cast<double>(p(rng));
}

// streams: counts use (poisson_stream, impulse_stream) = (0, 2); open beam
// uses (1, 3), so scan and flat-field noise are independent.
ProjectionStack simulate_impl(const Volume* vol, const ConeBeamGeometry& geom,
                              const AcquisitionParams& params,
                              std::uint64_t poisson_stream,
                              std::uint64_t impulse_stream) {
    geom.validate();
    params.validate(geom.view_count());
    ProjectionStack out(geom.view_count(), geom.det_rows, geom.det_cols);
    const bool shifted = !params.shift_pattern.empty();

    parallel_for(0, static_cast<std::size_t>(geom.view_count()), [&](std::size_t sv) {
        const int v = static_cast<int>(sv);
        const Vec3 src = geom.source_position(v);
        const double drow = shifted ? params.shift_pattern[sv].drow : 0.0;
        const double dcol = shifted ? params.shift_pattern[sv].dcol : 0.0;
        for (int r = 0; r < geom.det_rows; ++r) {
            for (int c = 0; c < geom.det_cols; ++c) {
                double line = 0.0;
                if (vol) {
                    const Vec3 px = geom.pixel_center(v, r, c, drow, dcol);
                    trace_ray(vol->grid, src, px, [&](std::size_t idx, double len) {
                        line += vol->data[idx] * len;
                    });
                }
                const double lambda_bar = params.incident_counts * std::exp(-line);
                const std::uint64_t pixel =
                    static_cast<std::uint64_t>(r) * geom.det_cols + c;
                double counts = lambda_bar;
                if (params.enable_poisson) {
                    SplitMix64 rng(pixel_stream_seed(params.rng_seed, poisson_stream,
                                                     sv, pixel));
                    counts = sample_counts(lambda_bar, rng);
                }
                if (params.impulse_rate > 0.0) {
                    SplitMix64 rng(pixel_stream_seed(params.rng_seed, impulse_stream,
                                                     sv, pixel));
                    std::bernoulli_distribution hit(params.impulse_rate);
                    if (hit(rng)) counts += params.impulse_amplitude;
                }
                out.at(v, r, c) = counts;
            }
        }
    });
    return out;
}

} // namespace

void AcquisitionParams::validate(int nviews) const {
    if (incident_counts <= 0.0)
        throw config_error("acquisition: incident_counts must be positive");
    if (impulse_rate < 0.0 || impulse_rate >= 1.0)
        throw config_error("acquisition: impulse_rate must be in [0, 1)");
    if (impulse_amplitude < 0.0)
        throw config_error("acquisition: impulse_amplitude must be nonnegative");
    if (!shift_pattern.empty() &&
        shift_pattern.size() != static_cast<std::size_t>(nviews))
        throw config_error("acquisition: shift_pattern must have one entry per view");
}

ProjectionStack simulate_counts(const Volume& vol, const ConeBeamGeometry& geom,
                                const AcquisitionParams& params) {
    return simulate_impl(&vol, geom, params, 0, 2);
}

ProjectionStack simulate_open_beam(const ConeBeamGeometry& geom,
                                   const AcquisitionParams& params) {
    return simulate_impl(nullptr, geom, params, 1, 3);
}

} // namespace cbct

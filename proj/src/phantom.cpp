#include "cbct/phantom.hpp"

#include <algorithm>
#include <cmath>

#include "cbct/parallel.hpp"

namespace cbct {

void TrisoPhantomSpec::validate() const {
    if (shells.empty()) throw config_error("phantom: at least one shell required");
    double prev = 0.0;
    for (const auto& s : shells) {
        if (s.outer_radius <= prev)
            throw config_error("phantom: shell radii must be strictly increasing");
        if (s.attenuation < 0.0)
            throw config_error("phantom: attenuation must be nonnegative");
        prev = s.outer_radius;
    }
    if (background_attenuation < 0.0)
        throw config_error("phantom: background attenuation must be nonnegative");
    const double outer = shells.back().outer_radius;
    for (const auto& d : defects) {
        if (d.radius <= 0.0) throw config_error("phantom: defect radius must be positive");
        if (norm(d.center - center) + d.radius > outer)
            throw config_error("phantom: defects must lie inside the outermost shell");
    }
}

double TrisoPhantomSpec::attenuation_at(const Vec3& p) const {
    for (const auto& d : defects) {
        const Vec3 q = p - d.center;
        if (dot(q, q) <= d.radius * d.radius) return background_attenuation;
    }
    const Vec3 q = p - center;
    const double r2 = dot(q, q);
    for (const auto& s : shells) {
        if (r2 <= s.outer_radius * s.outer_radius) return s.attenuation;
    }
    return background_attenuation;
}

Volume rasterize_phantom(const TrisoPhantomSpec& spec, const VolumeGrid& grid) {
    spec.validate();
    Volume vol(grid);
    parallel_for(0, static_cast<std::size_t>(grid.nz), [&](std::size_t izs) {
        const int iz = static_cast<int>(izs);
        for (int iy = 0; iy < grid.ny; ++iy) {
            for (int ix = 0; ix < grid.nx; ++ix) {
                vol.at(ix, iy, iz) = spec.attenuation_at(grid.voxel_center(ix, iy, iz));
            }
        }
    });
    return vol;
}

namespace {

// Intersection of the ray o + t*u (u unit, t >= 0) with the ball
// |x - c| <= r, as a parameter interval.  Returns false if empty.
bool ray_ball_interval(const Vec3& o, const Vec3& u, const Vec3& c, double r,
                       double& t0, double& t1) {
    const Vec3 m = o - c;
    const double b = dot(m, u);
    const double cc = dot(m, m) - r * r;
    const double disc = b * b - cc;
    if (disc <= 0.0) return false;
    const double s = std::sqrt(disc);
    t0 = std::max(-b - s, 0.0);
    t1 = -b + s;
    return t1 > t0;
}

} // namespace

double phantom_line_integral(const TrisoPhantomSpec& spec, const Vec3& origin,
                             const Vec3& direction) {
    spec.validate();
    const double dn = norm(direction);
    if (dn == 0.0) throw config_error("phantom_line_integral: zero direction");
    const Vec3 u = (1.0 / dn) * direction;

    // Decompose the piecewise-constant field into nested balls:
    //   mu(x) = mu_bg + sum_i (mu_i - mu_next(i)) * [x in ball_i]
    // so the integral is a sum of chord lengths.  Defects reset the field to
    // background wherever they overlap a ball, so each (ball, defect)
    // interval overlap is subtracted with the same coefficient.
    double total = 0.0;
    const std::size_t n = spec.shells.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double mu_next =
            (i + 1 < n) ? spec.shells[i + 1].attenuation : spec.background_attenuation;
        const double dmu = spec.shells[i].attenuation - mu_next;
        if (dmu == 0.0) continue;
        double a0, a1;
        if (!ray_ball_interval(origin, u, spec.center, spec.shells[i].outer_radius, a0, a1))
            continue;
        double len = a1 - a0;
        for (const auto& d : spec.defects) {
            double b0, b1;
            if (!ray_ball_interval(origin, u, d.center, d.radius, b0, b1)) continue;
            const double lo = std::max(a0, b0), hi = std::min(a1, b1);
            if (hi > lo) len -= hi - lo;
        }
        total += dmu * len;
    }
    return total;
}

} // namespace cbct

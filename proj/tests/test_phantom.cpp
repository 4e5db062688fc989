#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cbct/phantom.hpp"
#include "helpers.hpp"

using namespace cbct;
using namespace cbct::testing;

namespace {

/// Independent oracle: midpoint-rule integral of (attenuation_at - background)
/// along origin + t*dir over t in [t0, t1].  The integrand is piecewise
/// constant, so the error is bounded by (step) * (jump count) * (max jump).
double midpoint_integral(const TrisoPhantomSpec& spec, const Vec3& origin,
                         const Vec3& dir, double t0, double t1, long long n) {
    const double h = (t1 - t0) / static_cast<double>(n);
    double sum = 0.0;
    for (long long i = 0; i < n; ++i) {
        const double t = t0 + (static_cast<double>(i) + 0.5) * h;
        const Vec3 p = origin + t * dir;
        sum += spec.attenuation_at(p) - spec.background_attenuation;
    }
    return sum * h;
}

TrisoPhantomSpec two_shell_spec() {
    TrisoPhantomSpec spec;
    spec.center = {0.1, -0.05, 0.02};
    spec.shells = {{0.2, 3.0}, {0.45, 0.7}};
    spec.background_attenuation = 0.0;
    return spec;
}

} // namespace

TEST_SUITE("phantom") {

TEST_CASE("attenuation_at classifies layers, outside, and defects") {
    TrisoPhantomSpec spec = two_shell_spec();
    spec.background_attenuation = 0.01;
    spec.defects = {{{0.1, -0.05, 0.02 + 0.3}, 0.05}}; // inside outer shell
    spec.validate();

    CHECK(spec.attenuation_at(spec.center) == 3.0);                      // kernel
    CHECK(spec.attenuation_at({0.1, -0.05 + 0.3, 0.02}) == 0.7);         // shell 2
    CHECK(spec.attenuation_at({0.1, -0.05, 0.6}) == 0.01);               // outside
    CHECK(spec.attenuation_at({0.1, -0.05, 0.32}) == 0.01);              // defect
    CHECK(spec.attenuation_at({0.1, -0.05, 0.02 + 0.19}) == 3.0);        // just inside kernel
}

TEST_CASE("line integral matches midpoint quadrature oracle on an off-center ray") {
    const TrisoPhantomSpec spec = two_shell_spec();
    const Vec3 origin{-2.0, 0.03, -0.07};
    Vec3 dir{1.0, 0.021, 0.013};
    const double n = norm(dir);
    dir = (1.0 / n) * dir;

    const double exact = phantom_line_integral(spec, origin, dir);
    // Restrict quadrature to a span that certainly brackets the phantom.
    const double oracle = midpoint_integral(spec, origin, dir, 1.0, 3.2, 20'000'000);
    // step 1.1e-7 mm, <= 8 jumps of height <= 3 -> abs error < 3e-6
    CHECK(std::abs(exact - oracle) < 5e-6);
    CHECK(exact > 0.1); // the ray does pass through the shells
}

TEST_CASE("line integral through a single ball is the exact chord") {
    TrisoPhantomSpec spec;
    spec.center = {0.0, 0.0, 0.0};
    spec.shells = {{0.4, 2.5}};
    const double d = 0.17; // impact parameter
    const double chord = 2.0 * std::sqrt(0.4 * 0.4 - d * d);
    const double got = phantom_line_integral(spec, {-5.0, d, 0.0}, {1.0, 0.0, 0.0});
    CHECK(got == doctest::Approx(2.5 * chord).epsilon(1e-12));

    // Ray starting inside the ball: only the forward half counts (t >= 0).
    const double half = phantom_line_integral(spec, {0.0, d, 0.0}, {1.0, 0.0, 0.0});
    CHECK(half == doctest::Approx(2.5 * chord / 2.0).epsilon(1e-12));

    // Miss entirely.
    CHECK(phantom_line_integral(spec, {-5.0, 0.5, 0.0}, {1.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("defect subtracts its chord exactly and order does not matter") {
    TrisoPhantomSpec spec;
    spec.center = {0.0, 0.0, 0.0};
    spec.shells = {{0.5, 1.0}};
    spec.defects = {{{0.25, 0.0, 0.0}, 0.1}, {{-0.3, 0.0, 0.0}, 0.08}};
    spec.validate();

    const Vec3 origin{-4.0, 0.0, 0.0};
    const Vec3 dir{1.0, 0.0, 0.0};
    const double with = phantom_line_integral(spec, origin, dir);
    const double expect = 1.0 * (2.0 * 0.5 - 2.0 * 0.1 - 2.0 * 0.08);
    CHECK(with == doctest::Approx(expect).epsilon(1e-12));

    std::swap(spec.defects[0], spec.defects[1]);
    CHECK(phantom_line_integral(spec, origin, dir) ==
          doctest::Approx(with).epsilon(1e-14));
}

TEST_CASE("defect permutation leaves rasterization identical") {
    TrisoPhantomSpec spec;
    spec.shells = {{0.5, 1.0}};
    spec.defects = {{{0.2, 0.1, 0.0}, 0.05}, {{-0.2, -0.1, 0.1}, 0.07}};
    const VolumeGrid grid = make_centered_grid(20, 20, 20, 0.06);
    const Volume a = rasterize_phantom(spec, grid);
    std::swap(spec.defects[0], spec.defects[1]);
    const Volume b = rasterize_phantom(spec, grid);
    CHECK(a.data == b.data);
}

TEST_CASE("rasterized ball mass converges to the analytic volume") {
    TrisoPhantomSpec spec;
    spec.center = {0.011, -0.007, 0.003};
    spec.shells = {{0.4, 1.0}};
    const double analytic = 4.0 / 3.0 * std::numbers::pi * 0.4 * 0.4 * 0.4;

    auto mass = [&](int n) {
        const VolumeGrid grid = make_centered_grid(n, n, n, 1.28 / n);
        const Volume v = rasterize_phantom(spec, grid);
        double s = 0.0;
        for (double x : v.data) s += x;
        return s * grid.voxel_size * grid.voxel_size * grid.voxel_size;
    };
    const double coarse = mass(32);
    const double fine = mass(128);
    CHECK(std::abs(fine - analytic) / analytic < 0.02);
    CHECK(std::abs(fine - analytic) < std::abs(coarse - analytic)); // converging
}

TEST_CASE("invalid specs are rejected") {
    TrisoPhantomSpec spec;
    CHECK_THROWS_AS(spec.validate(), config_error); // no shells

    spec.shells = {{0.4, 1.0}, {0.3, 0.5}};
    CHECK_THROWS_AS(spec.validate(), config_error); // radii out of order

    spec.shells = {{0.3, 1.0}, {0.4, -0.5}};
    CHECK_THROWS_AS(spec.validate(), config_error); // negative attenuation

    spec.shells = {{0.3, 1.0}, {0.4, 0.5}};
    spec.defects = {{{0.38, 0.0, 0.0}, 0.05}};
    CHECK_THROWS_AS(spec.validate(), config_error); // defect pokes outside

    spec.defects = {{{0.2, 0.0, 0.0}, 0.05}};
    CHECK_NOTHROW(spec.validate());

    // direction is normalized internally: scaling it cannot change the value
    const double unit_dir = phantom_line_integral(spec, {-2.0, 0.01, 0.0}, {1, 0, 0});
    const double scaled_dir = phantom_line_integral(spec, {-2.0, 0.01, 0.0}, {0.5, 0, 0});
    CHECK(scaled_dir == doctest::Approx(unit_dir).epsilon(1e-15));
    CHECK_THROWS_AS(
        (void)phantom_line_integral(spec, {0, 0, 0}, {0, 0, 0}), // zero direction
        config_error);
}

} // TEST_SUITE

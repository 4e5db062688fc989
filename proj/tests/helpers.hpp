#pragma once

// Shared fixtures for the unit and acceptance suites: small deterministic
// random fields and a reference cone-beam setup sized for fast tests.

#include <filesystem>
#include <string>
#include <vector>

#include "cbct/random.hpp"
#include "cbct/types.hpp"

namespace cbct::testing {

inline double uniform01(SplitMix64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform in [lo, hi).
inline double uniform(SplitMix64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline Volume random_volume(const VolumeGrid& grid, SplitMix64& rng, double lo = 0.0,
                            double hi = 1.0) {
    Volume v(grid);
    for (auto& x : v.data) x = uniform(rng, lo, hi);
    return v;
}

inline ProjectionStack random_stack(int nviews, int nrows, int ncols, SplitMix64& rng,
                                    double lo = 0.0, double hi = 1.0) {
    ProjectionStack s(nviews, nrows, ncols);
    for (auto& x : s.data) x = uniform(rng, lo, hi);
    return s;
}

/// Small cone-beam geometry: R=10, D=40 (magnification 4), square detector.
inline ConeBeamGeometry small_geometry(int det, int nviews, double pitch = 0.08) {
    ConeBeamGeometry g;
    g.source_to_axis = 10.0;
    g.source_to_detector = 40.0;
    g.det_rows = det;
    g.det_cols = det;
    g.pixel_pitch = pitch;
    g.view_angles = uniform_view_angles(nviews);
    return g;
}

inline std::string source_dir() { return CBCT_SOURCE_DIR; }

inline std::string temp_dir(const std::string& leaf) {
    auto p = std::filesystem::temp_directory_path() / "cbct_tests" / leaf;
    std::filesystem::create_directories(p);
    return p.string();
}

} // namespace cbct::testing

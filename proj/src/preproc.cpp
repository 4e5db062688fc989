#include "cbct/preproc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cbct/parallel.hpp"

namespace cbct {

namespace {

// Mirrored edge index (symmetric reflection: -1 -> 0, n -> n-1).
inline int reflect(int i, int n) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - 1 - i;
    return i;
}

} // namespace

ProjectionStack median_filter(const ProjectionStack& stack, int window) {
    if (window < 1 || window % 2 == 0)
        throw config_error("median_filter: window must be odd and >= 1");
    if (window > stack.nrows || window > stack.ncols)
        throw config_error("median_filter: window exceeds image size");
    if (window == 1) return stack;
    ProjectionStack out(stack.nviews, stack.nrows, stack.ncols);
    const int half = window / 2;
    parallel_for(0, static_cast<std::size_t>(stack.nviews), [&](std::size_t sv) {
        const int v = static_cast<int>(sv);
        std::vector<double> buf(static_cast<std::size_t>(window) * window);
        for (int r = 0; r < stack.nrows; ++r) {
            for (int c = 0; c < stack.ncols; ++c) {
                std::size_t n = 0;
                for (int dr = -half; dr <= half; ++dr) {
                    const int rr = reflect(r + dr, stack.nrows);
                    for (int dc = -half; dc <= half; ++dc) {
                        buf[n++] = stack.at(v, rr, reflect(c + dc, stack.ncols));
                    }
                }
                auto mid = buf.begin() + static_cast<std::ptrdiff_t>(n / 2);
                std::nth_element(buf.begin(), mid, buf.begin() + static_cast<std::ptrdiff_t>(n));
                out.at(v, r, c) = *mid;
            }
        }
    });
    return out;
}

ProjectionStack normalize_and_log(const ProjectionStack& counts,
                                  const ProjectionStack& open_beam) {
    if (!counts.same_shape(open_beam))
        throw config_error("normalize_and_log: counts/open shape mismatch");
    ProjectionStack g(counts.nviews, counts.nrows, counts.ncols);
    for (std::size_t i = 0; i < counts.data.size(); ++i) {
        const double open = open_beam.data[i];
        if (!(open > 0.0))
            throw numeric_error("normalize_and_log: nonpositive open-beam pixel");
        g.data[i] = std::log(open / std::max(counts.data[i], kCountFloor));
    }
    return g;
}

ShiftCorrected apply_shift_correction(const ProjectionStack& stack,
                                      const std::vector<ViewShift>& shift_pattern) {
    if (!shift_pattern.empty() &&
        shift_pattern.size() != static_cast<std::size_t>(stack.nviews))
        throw config_error("shift correction: pattern size must match view count");
    ShiftCorrected out;
    out.data = ProjectionStack(stack.nviews, stack.nrows, stack.ncols);
    out.valid = ProjectionStack(stack.nviews, stack.nrows, stack.ncols);
    for (int v = 0; v < stack.nviews; ++v) {
        const ViewShift s = shift_pattern.empty()
                                ? ViewShift{}
                                : shift_pattern[static_cast<std::size_t>(v)];
        if (std::abs(s.drow) >= stack.nrows || std::abs(s.dcol) >= stack.ncols)
            throw config_error("shift correction: shift magnitude exceeds image size");
        // The acquisition placed pixel (r, c) where nominal pixel
        // (r + drow, c + dcol) belongs, so the nominal image is recovered
        // by sampling the measurement at (r - drow, c - dcol).
        for (int r = 0; r < stack.nrows; ++r) {
            const int sr = r - s.drow;
            for (int c = 0; c < stack.ncols; ++c) {
                const int sc = c - s.dcol;
                if (sr >= 0 && sr < stack.nrows && sc >= 0 && sc < stack.ncols) {
                    out.data.at(v, r, c) = stack.at(v, sr, sc);
                    out.valid.at(v, r, c) = 1.0;
                }
            }
        }
    }
    return out;
}

WeightSet weights_from_counts(const ProjectionStack& counts) {
    WeightSet ws;
    ws.w = counts;
    ws.threshold_used = 0.0;
    for (double v : counts.data)
        if (v < 0.0) throw numeric_error("weights_from_counts: negative count");
    return ws;
}

WeightSet threshold_weights(const WeightSet& in, double T) {
    if (T < 0.0) throw config_error("threshold_weights: T must be nonnegative");
    WeightSet out = in;
    out.threshold_used = T;
    for (double& v : out.w.data)
        if (v < T) v = 0.0;
    return out;
}

ProjectionStack clip_counts(const ProjectionStack& counts, double floor) {
    if (floor <= 0.0) throw config_error("clip_counts: floor must be positive");
    ProjectionStack out = counts;
    for (double& v : out.data) v = std::max(v, floor);
    return out;
}

} // namespace cbct

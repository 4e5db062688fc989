#pragma once

#include <vector>

#include "cbct/scan_sim.hpp"
#include "cbct/types.hpp"

namespace cbct {

/// Per-image 2D median filter with reflected edge padding.  Window must be
/// odd and no larger than either image dimension.  Applied view by view.
ProjectionStack median_filter(const ProjectionStack& stack, int window);

/// Log-normalization g = ln(open / max(counts, kCountFloor)).  The floor
/// keeps g finite at zero counts; see kCountFloor.  g can be negative when
/// noise pushes counts above the open beam; that is preserved.
/// Throws numeric_error if any open-beam pixel is nonpositive.
ProjectionStack normalize_and_log(const ProjectionStack& counts,
                                  const ProjectionStack& open_beam);

/// Floor applied to counts inside the log, in count units.  Chosen so g is
/// finite even at zero counts; those pixels normally carry zero weight, but
/// a NaN/inf there would still poison weighted arithmetic.
inline constexpr double kCountFloor = 0.5;

/// Undoes the per-view acquisition shifts: view v is translated by
/// (-drow, -dcol).  Pixels whose source location fell outside the panel are
/// zeroed and recorded in `valid` (same shape, 1 = trustworthy).  Exact on
/// the overlap since shifts are integer pixels.
struct ShiftCorrected {
    ProjectionStack data;
    ProjectionStack valid;
};
ShiftCorrected apply_shift_correction(const ProjectionStack& stack,
                                      const std::vector<ViewShift>& shift_pattern);

/// W_ii = lambda_i: the raw (median-filtered, shift-corrected) count is the
/// inverse noise variance up to scale.  Rejects negative counts.
WeightSet weights_from_counts(const ProjectionStack& counts);

/// Photon-starvation cut for the iterative method: weights below T are set
/// to exactly zero (lambda >= T kept), removing those measurements from the
/// data term entirely.
WeightSet threshold_weights(const WeightSet& in, double T);

/// Photon-starvation treatment for the analytic method: counts_i is raised
/// to at least `floor` before the log, which caps the log-normalized value.
ProjectionStack clip_counts(const ProjectionStack& counts, double floor);

} // namespace cbct

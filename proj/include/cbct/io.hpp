#pragma once

#include <string>
#include <vector>

#include "cbct/phantom.hpp"
#include "cbct/scan_sim.hpp"
#include "cbct/types.hpp"

namespace cbct {

// Array files are raw little-endian float32 next to a JSON sidecar:
// <base>.raw holds the samples, <base>.json records shape, storage order,
// units, and kind, plus caller-supplied provenance fields (seed, incident
// counts, threshold_used, ...).  In-memory arrays are double; writing
// rounds to float32, so save/load round-trips are exact only for values
// already representable in float32 (reloading a float32 file is bitwise
// stable).

/// Writes <base>.raw and <base>.json.  `kind` is recorded in the sidecar
/// (attenuation, counts, log_normalized, weights, valid_mask).
/// `extra_sidecar_json` must be a serialized JSON object or empty.
void save_volume(const std::string& base, const Volume& vol, const std::string& kind,
                 const std::string& extra_sidecar_json = "");
Volume load_volume(const std::string& base);

void save_projections(const std::string& base, const ProjectionStack& stack,
                      const std::string& kind,
                      const std::string& extra_sidecar_json = "");
ProjectionStack load_projections(const std::string& base);

/// Reads the `kind` field of <base>.json.
std::string sidecar_kind(const std::string& base);

/// Appends one row to a CSV file, creating it with `header` first if absent.
/// The row is written with a single append call, so concurrent appenders
/// cannot interleave within a row.  Numbers are formatted with %.17g.
void append_csv_row(const std::string& path, const std::string& header,
                    const std::vector<std::string>& cells);
std::string csv_number(double v);

/// Geometry serialization; field names match the ConeBeamGeometry members.
/// On read, "uniform_view_angles": N is accepted in place of "view_angles"
/// and expands to uniform_view_angles(N).
ConeBeamGeometry load_geometry(const std::string& path);
void save_geometry(const std::string& path, const ConeBeamGeometry& geom);

TrisoPhantomSpec load_phantom_spec(const std::string& path);

/// Acquisition parameters; "shift_pattern" accepts null/absent (no shifts),
/// an explicit [[drow, dcol], ...] array (one entry per view), or
/// {"period": P, "drow": a, "dcol": b} shifting every P-th view.
AcquisitionParams load_acquisition(const std::string& path, int nviews);

/// 8-bit grayscale PNG of the z-slice at index iz, windowed to [lo, hi];
/// the window and slice index are recorded in <path>.json.
void write_png_slice(const std::string& path, const Volume& vol, int iz,
                     double lo, double hi);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace cbct

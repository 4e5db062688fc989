#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbct/fdk.hpp"
#include "cbct/mbir.hpp"
#include "cbct/metrics.hpp"
#include "cbct/phantom.hpp"
#include "cbct/preproc.hpp"
#include "cbct/scan_sim.hpp"
#include "cbct/types.hpp"

namespace cbct {

/// Fully resolved experiment description: the referenced phantom, geometry,
/// and acquisition files are loaded at parse time, so a config in hand is
/// always self-consistent.
struct ExperimentConfig {
    std::string id;                 // experiment id for CSV rows
    TrisoPhantomSpec phantom;
    ConeBeamGeometry geometry;
    AcquisitionParams acquisition;
    VolumeGrid grid;                // reconstruction / ground-truth grid

    int median_window = 7;
    double weight_threshold = 50.0; // T, counts
    double clip_floor = 50.0;       // counts

    std::string method = "mbir-thresholded";
    PriorParams prior;
    SolverParams solver;
    FdkFilter fdk_filter = FdkFilter::ram_lak;

    std::vector<int> subsample_factors{1, 2, 4, 8};
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    /// Metrics regions: the cladding shell probed by region_stddev and the
    /// kernel-exclusion radius of the default NRMSE mask, in mm.
    double cladding_inner = 0.0, cladding_outer = 0.0;
    double kernel_exclude_radius = 0.0;

    std::string resolved_json;      // full config echoed to output dirs

    void validate() const;
};

/// Loads a config file; paths inside it resolve relative to its directory.
/// CLI overrides (seed, method, out dir, stride) are applied by the caller
/// after loading.
ExperimentConfig load_experiment_config(const std::string& path);

/// Regenerates cfg.resolved_json from the struct fields; call after applying
/// CLI overrides so the echoed config reflects what actually ran.
void refresh_resolved_json(ExperimentConfig& cfg);

/// The four compared pipelines.
const std::vector<std::string>& method_names(); // fdk-naive, fdk-clipped, mbir-plain, mbir-thresholded
bool is_mbir_method(const std::string& method);

/// Simulated scan after the fixed preprocessing chain: median filter on both
/// count stacks, log-normalization (plain and count-clipped variants), shift
/// correction, and weights from the corrected counts.  Weight thresholding
/// is applied per method at reconstruction time.
struct PreparedScan {
    ProjectionStack counts;       // raw simulated counts
    ProjectionStack open_beam;    // raw simulated flat field
    ProjectionStack g;            // shift-corrected log-normalized data
    ProjectionStack g_clipped;    // same, with counts clipped before the log
    ProjectionStack valid;        // 1 where shift correction kept real data
    WeightSet weights;            // corrected counts, zeroed where invalid
    Volume ground_truth;          // rasterized phantom on cfg.grid
};

PreparedScan prepare_scan(const ExperimentConfig& cfg);

/// Keeps every stride-th view (angles, projections, weights).  stride must
/// divide the view count evenly.
struct ViewSubset {
    ConeBeamGeometry geometry;
    ProjectionStack g;
    ProjectionStack g_clipped;
    WeightSet weights;
};
ViewSubset subset_views(const ConeBeamGeometry& geom, const PreparedScan& scan,
                        int stride);

/// Reconstructs with one of the four methods from a prepared (optionally
/// view-subsetted) scan.  MBIR methods start from the clipped-counts
/// analytic reconstruction when cfg.solver.init is fdk.  If trace is
/// non-null, MBIR methods store their cost trace there.
Volume reconstruct_method(const ExperimentConfig& cfg, const std::string& method,
                          const ConeBeamGeometry& geom, const ProjectionStack& g,
                          const ProjectionStack& g_clipped, const WeightSet& weights,
                          std::vector<CostSample>* trace = nullptr);

// Command implementations behind the CLI verbs.  Each writes its artifacts
// plus the resolved config into cfg.out_dir and returns 0 on success.
int cmd_phantom(const ExperimentConfig& cfg);
int cmd_simulate(const ExperimentConfig& cfg);
int cmd_reconstruct(const ExperimentConfig& cfg, const std::string& method,
                    int views_stride = 1);
int cmd_sparse_sweep(const ExperimentConfig& cfg);
int cmd_profile(const ExperimentConfig& cfg, const std::string& method);
int cmd_metrics(const ExperimentConfig& cfg, const std::string& method);

} // namespace cbct

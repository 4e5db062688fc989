#include "cbct/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cbct/io.hpp"

namespace cbct {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"fdk-naive", "fdk-clipped",
                                                "mbir-plain", "mbir-thresholded"};
    return names;
}

bool is_mbir_method(const std::string& method) {
    return method == "mbir-plain" || method == "mbir-thresholded";
}

void ExperimentConfig::validate() const {
    phantom.validate();
    geometry.validate();
    acquisition.validate(geometry.view_count());
    if (grid.nx < 1 || grid.ny < 1 || grid.nz < 1 || grid.voxel_size <= 0.0)
        throw config_error("config: invalid grid");
    if (median_window < 1 || median_window % 2 == 0)
        throw config_error("config: median_window must be odd and >= 1");
    if (weight_threshold < 0.0)
        throw config_error("config: weight_threshold must be nonnegative");
    if (clip_floor <= 0.0) throw config_error("config: clip_floor must be positive");
    const auto& names = method_names();
    if (std::find(names.begin(), names.end(), method) == names.end())
        throw config_error("config: unknown method " + method);
    prior.validate();
    solver.validate();
    for (int f : subsample_factors) {
        if (f < 1) throw config_error("config: subsample factors must be >= 1");
        if (geometry.view_count() % f != 0)
            throw config_error("config: subsample factor must divide the view count");
    }
    if (out_dir.empty()) throw config_error("config: out_dir required");
    if (cladding_outer > 0.0 && cladding_inner >= cladding_outer)
        throw config_error("config: cladding_inner must be below cladding_outer");
}

namespace {

std::string resolve_relative(const std::string& base_dir, const std::string& p) {
    fs::path q(p);
    if (q.is_absolute()) return p;
    return (fs::path(base_dir) / q).string();
}

json config_to_json(const ExperimentConfig& cfg) {
    json phantom;
    phantom["center"] = {cfg.phantom.center.x, cfg.phantom.center.y,
                         cfg.phantom.center.z};
    for (const auto& s : cfg.phantom.shells)
        phantom["shells"].push_back(
            {{"outer_radius", s.outer_radius}, {"attenuation", s.attenuation}});
    phantom["background_attenuation"] = cfg.phantom.background_attenuation;
    phantom["defects"] = json::array();
    for (const auto& d : cfg.phantom.defects)
        phantom["defects"].push_back(
            {{"center", {d.center.x, d.center.y, d.center.z}},
             {"radius", d.radius}});

    json geometry{{"source_to_axis", cfg.geometry.source_to_axis},
                  {"source_to_detector", cfg.geometry.source_to_detector},
                  {"det_rows", cfg.geometry.det_rows},
                  {"det_cols", cfg.geometry.det_cols},
                  {"pixel_pitch", cfg.geometry.pixel_pitch},
                  {"shift_rows", cfg.geometry.shift_rows},
                  {"shift_cols", cfg.geometry.shift_cols},
                  {"view_angles", cfg.geometry.view_angles}};

    json shift_pattern = json::array();
    for (const auto& s : cfg.acquisition.shift_pattern)
        shift_pattern.push_back({s.drow, s.dcol});
    json acquisition{{"incident_counts", cfg.acquisition.incident_counts},
                     {"rng_seed", cfg.acquisition.rng_seed},
                     {"impulse_rate", cfg.acquisition.impulse_rate},
                     {"impulse_amplitude", cfg.acquisition.impulse_amplitude},
                     {"enable_poisson", cfg.acquisition.enable_poisson},
                     {"shift_pattern", shift_pattern}};

    return json{
        {"id", cfg.id},
        {"phantom", phantom},
        {"geometry", geometry},
        {"acquisition", acquisition},
        {"grid",
         {{"nx", cfg.grid.nx},
          {"ny", cfg.grid.ny},
          {"nz", cfg.grid.nz},
          {"voxel_size", cfg.grid.voxel_size},
          {"origin", {cfg.grid.origin.x, cfg.grid.origin.y, cfg.grid.origin.z}}}},
        {"median_window", cfg.median_window},
        {"weight_threshold", cfg.weight_threshold},
        {"clip_floor", cfg.clip_floor},
        {"method", cfg.method},
        {"prior",
         {{"sigma_f", cfg.prior.sigma_f},
          {"c", cfg.prior.c},
          {"p", cfg.prior.p},
          {"neighborhood", cfg.prior.neighborhood}}},
        {"solver",
         {{"max_iterations", cfg.solver.max_iterations},
          {"lipschitz", cfg.solver.lipschitz},
          {"init", cfg.solver.init == SolverParams::Init::zero ? "zero" : "fdk"},
          {"cost_log_interval", cfg.solver.cost_log_interval}}},
        {"fdk_filter", cfg.fdk_filter == FdkFilter::hann ? "hann" : "ram-lak"},
        {"subsample_factors", cfg.subsample_factors},
        {"out_dir", cfg.out_dir},
        {"seed", cfg.seed},
        {"metrics",
         {{"cladding_inner", cfg.cladding_inner},
          {"cladding_outer", cfg.cladding_outer},
          {"kernel_exclude_radius", cfg.kernel_exclude_radius}}}};
}

void echo_config(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    write_text_file((fs::path(cfg.out_dir) / "config_resolved.json").string(),
                    cfg.resolved_json);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

double phantom_max_attenuation(const TrisoPhantomSpec& spec) {
    double m = spec.background_attenuation;
    for (const auto& s : spec.shells) m = std::max(m, s.attenuation);
    return m;
}

void write_slice_png(const ExperimentConfig& cfg, const Volume& vol,
                     const std::string& name) {
    const double hi = 1.1 * phantom_max_attenuation(cfg.phantom);
    write_png_slice(out_path(cfg, name), vol, vol.grid.nz / 2, 0.0,
                    hi > 0.0 ? hi : 1.0);
}

RegionMask truth_mask(const ExperimentConfig& cfg) {
    return make_interior_mask(cfg.grid, cfg.grid.voxel_size, cfg.phantom.center,
                              cfg.kernel_exclude_radius);
}

RegionMask cladding_mask(const ExperimentConfig& cfg) {
    return make_shell_mask(cfg.grid, cfg.phantom.center, cfg.cladding_inner,
                           cfg.cladding_outer);
}

void append_metrics_row(const ExperimentConfig& cfg, const std::string& csv,
                        const std::string& method, int n_views, double nrmse_val,
                        double stddev_val) {
    append_csv_row(out_path(cfg, csv),
                   "experiment,method,n_views,nrmse_ref_l2_masked,region_stddev",
                   {cfg.id, method, std::to_string(n_views), csv_number(nrmse_val),
                    csv_number(stddev_val)});
}

void write_cost_trace(const ExperimentConfig& cfg, const std::string& name,
                      const std::vector<CostSample>& trace) {
    const std::string path = out_path(cfg, name);
    std::error_code ec;
    fs::remove(path, ec);
    for (const auto& s : trace)
        append_csv_row(path, "iteration,data_cost,prior_cost,total_cost",
                       {std::to_string(s.iteration), csv_number(s.data),
                        csv_number(s.prior), csv_number(s.total)});
}

void write_profile_csv(const ExperimentConfig& cfg, const Volume& vol,
                       const std::string& name) {
    // Default profile: the full x-row of voxels through the phantom centre.
    const VolumeGrid& g = vol.grid;
    auto clampi = [](int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); };
    const int iy = clampi(
        static_cast<int>((cfg.phantom.center.y - g.origin.y) / g.voxel_size), 0,
        g.ny - 1);
    const int iz = clampi(
        static_cast<int>((cfg.phantom.center.z - g.origin.z) / g.voxel_size), 0,
        g.nz - 1);
    const auto prof =
        extract_line_profile(vol, {0, iy, iz}, {g.nx - 1, iy, iz});
    const std::string path = out_path(cfg, name);
    std::error_code ec;
    fs::remove(path, ec);
    for (const auto& s : prof)
        append_csv_row(path, "position_mm,value",
                       {csv_number(s.position), csv_number(s.value)});
}

} // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    const std::string dir = fs::path(path).parent_path().string();

    ExperimentConfig cfg;
    try {
        cfg.id = j.value("id", fs::path(path).stem().string());
        cfg.geometry =
            load_geometry(resolve_relative(dir, j.at("geometry").get<std::string>()));
        cfg.phantom =
            load_phantom_spec(resolve_relative(dir, j.at("phantom").get<std::string>()));
        cfg.acquisition =
            load_acquisition(resolve_relative(dir, j.at("acquisition").get<std::string>()),
                             cfg.geometry.view_count());

        const auto& gj = j.at("grid");
        const int nx = gj.at("nx").get<int>();
        const int ny = gj.at("ny").get<int>();
        const int nz = gj.at("nz").get<int>();
        const double h = gj.at("voxel_size").get<double>();
        cfg.grid = make_centered_grid(nx, ny, nz, h);
        if (gj.contains("origin")) {
            const auto& o = gj.at("origin");
            cfg.grid.origin = {o.at(0).get<double>(), o.at(1).get<double>(),
                               o.at(2).get<double>()};
        }

        cfg.median_window = j.value("median_window", 7);
        cfg.weight_threshold = j.value("weight_threshold", 50.0);
        cfg.clip_floor = j.value("clip_floor", 50.0);
        cfg.method = j.value("method", std::string("mbir-thresholded"));
        if (j.contains("prior")) {
            const auto& p = j.at("prior");
            cfg.prior.sigma_f = p.value("sigma_f", cfg.prior.sigma_f);
            cfg.prior.c = p.value("c", cfg.prior.c);
            cfg.prior.p = p.value("p", cfg.prior.p);
            cfg.prior.neighborhood = p.value("neighborhood", cfg.prior.neighborhood);
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
            cfg.solver.lipschitz = s.value("lipschitz", cfg.solver.lipschitz);
            cfg.solver.cost_log_interval =
                s.value("cost_log_interval", cfg.solver.cost_log_interval);
            const std::string init = s.value("init", std::string("fdk"));
            if (init == "zero") cfg.solver.init = SolverParams::Init::zero;
            else if (init == "fdk") cfg.solver.init = SolverParams::Init::fdk;
            else throw config_error("config: solver.init must be zero or fdk");
        }
        const std::string fk = j.value("fdk_filter", std::string("ram-lak"));
        if (fk == "ram-lak") cfg.fdk_filter = FdkFilter::ram_lak;
        else if (fk == "hann") cfg.fdk_filter = FdkFilter::hann;
        else throw config_error("config: fdk_filter must be ram-lak or hann");
        if (j.contains("subsample_factors"))
            cfg.subsample_factors = j.at("subsample_factors").get<std::vector<int>>();
        cfg.out_dir = j.value("out_dir", std::string("out"));
        cfg.seed = j.value("seed", cfg.acquisition.rng_seed);
        cfg.acquisition.rng_seed = cfg.seed;

        if (j.contains("metrics")) {
            const auto& m = j.at("metrics");
            cfg.cladding_inner = m.value("cladding_inner", 0.0);
            cfg.cladding_outer = m.value("cladding_outer", 0.0);
            cfg.kernel_exclude_radius = m.value("kernel_exclude_radius", 0.0);
        }
        if (cfg.cladding_outer <= 0.0 && cfg.phantom.shells.size() >= 2) {
            cfg.cladding_inner = cfg.phantom.shells[cfg.phantom.shells.size() - 2]
                                     .outer_radius;
            cfg.cladding_outer = cfg.phantom.shells.back().outer_radius;
        }
        if (cfg.kernel_exclude_radius <= 0.0)
            cfg.kernel_exclude_radius = 1.2 * cfg.phantom.shells.front().outer_radius;
    } catch (const json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    cfg.validate();
    refresh_resolved_json(cfg);
    return cfg;
}

void refresh_resolved_json(ExperimentConfig& cfg) {
    cfg.resolved_json = config_to_json(cfg).dump(2) + "\n";
}

PreparedScan prepare_scan(const ExperimentConfig& cfg) {
    cfg.validate();
    PreparedScan scan;
    scan.ground_truth = rasterize_phantom(cfg.phantom, cfg.grid);
    scan.counts = simulate_counts(scan.ground_truth, cfg.geometry, cfg.acquisition);
    scan.open_beam = simulate_open_beam(cfg.geometry, cfg.acquisition);

    const ProjectionStack counts_f = median_filter(scan.counts, cfg.median_window);
    const ProjectionStack open_f = median_filter(scan.open_beam, cfg.median_window);
    const ProjectionStack counts_clipped = clip_counts(counts_f, cfg.clip_floor);

    const ProjectionStack g_raw = normalize_and_log(counts_f, open_f);
    const ProjectionStack gc_raw = normalize_and_log(counts_clipped, open_f);

    ShiftCorrected sc_g = apply_shift_correction(g_raw, cfg.acquisition.shift_pattern);
    ShiftCorrected sc_gc = apply_shift_correction(gc_raw, cfg.acquisition.shift_pattern);
    ShiftCorrected sc_counts =
        apply_shift_correction(counts_f, cfg.acquisition.shift_pattern);

    scan.g = std::move(sc_g.data);
    scan.g_clipped = std::move(sc_gc.data);
    scan.valid = std::move(sc_g.valid);

    scan.weights = weights_from_counts(sc_counts.data);
    for (std::size_t i = 0; i < scan.weights.w.data.size(); ++i)
        if (scan.valid.data[i] == 0.0) scan.weights.w.data[i] = 0.0;
    return scan;
}

ViewSubset subset_views(const ConeBeamGeometry& geom, const PreparedScan& scan,
                        int stride) {
    if (stride < 1) throw config_error("subset_views: stride must be >= 1");
    if (geom.view_count() % stride != 0)
        throw config_error("subset_views: stride must divide the view count");
    ViewSubset sub;
    sub.geometry = geom;
    sub.geometry.view_angles.clear();
    const int nsub = geom.view_count() / stride;
    sub.g = ProjectionStack(nsub, geom.det_rows, geom.det_cols);
    sub.g_clipped = ProjectionStack(nsub, geom.det_rows, geom.det_cols);
    sub.weights.w = ProjectionStack(nsub, geom.det_rows, geom.det_cols);
    sub.weights.threshold_used = scan.weights.threshold_used;
    for (int s = 0; s < nsub; ++s) {
        const int v = s * stride;
        sub.geometry.view_angles.push_back(
            geom.view_angles[static_cast<std::size_t>(v)]);
        for (int r = 0; r < geom.det_rows; ++r) {
            for (int c = 0; c < geom.det_cols; ++c) {
                sub.g.at(s, r, c) = scan.g.at(v, r, c);
                sub.g_clipped.at(s, r, c) = scan.g_clipped.at(v, r, c);
                sub.weights.w.at(s, r, c) = scan.weights.w.at(v, r, c);
            }
        }
    }
    return sub;
}

Volume reconstruct_method(const ExperimentConfig& cfg, const std::string& method,
                          const ConeBeamGeometry& geom, const ProjectionStack& g,
                          const ProjectionStack& g_clipped, const WeightSet& weights,
                          std::vector<CostSample>* trace) {
    FdkParams fdk;
    fdk.filter_kind = cfg.fdk_filter;
    fdk.grid = cfg.grid;

    if (method == "fdk-naive") return fdk_reconstruct(g, geom, fdk);
    if (method == "fdk-clipped") return fdk_reconstruct(g_clipped, geom, fdk);
    if (method == "mbir-plain" || method == "mbir-thresholded") {
        WeightSet W = weights;
        if (method == "mbir-thresholded")
            W = threshold_weights(weights, cfg.weight_threshold);
        Volume init(cfg.grid);
        const Volume* init_ptr = nullptr;
        if (cfg.solver.init == SolverParams::Init::fdk) {
            init = fdk_reconstruct(g_clipped, geom, fdk);
            init_ptr = &init;
        }
        OgmState st = ogm_reconstruct(g, W, geom, cfg.grid, &cfg.prior, cfg.solver,
                                      init_ptr);
        if (trace) *trace = st.trace;
        return std::move(st.f);
    }
    throw config_error("unknown method " + method);
}

int cmd_phantom(const ExperimentConfig& cfg) {
    echo_config(cfg);
    const Volume truth = rasterize_phantom(cfg.phantom, cfg.grid);
    save_volume(out_path(cfg, "phantom"), truth, "attenuation");
    write_slice_png(cfg, truth, "phantom.png");
    std::cout << "phantom: " << cfg.grid.nx << "x" << cfg.grid.ny << "x" << cfg.grid.nz
              << " voxels, " << cfg.grid.voxel_size << " mm voxel, "
              << cfg.phantom.shells.size() << " shells\n";
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    echo_config(cfg);
    const Volume truth = rasterize_phantom(cfg.phantom, cfg.grid);
    const ProjectionStack counts =
        simulate_counts(truth, cfg.geometry, cfg.acquisition);
    const ProjectionStack open = simulate_open_beam(cfg.geometry, cfg.acquisition);

    json extra{{"seed", cfg.acquisition.rng_seed},
               {"incident_counts", cfg.acquisition.incident_counts},
               {"impulse_rate", cfg.acquisition.impulse_rate},
               {"impulse_amplitude", cfg.acquisition.impulse_amplitude},
               {"enable_poisson", cfg.acquisition.enable_poisson}};
    json shifts = json::array();
    for (const auto& s : cfg.acquisition.shift_pattern)
        shifts.push_back({s.drow, s.dcol});
    extra["shift_pattern"] = shifts;
    save_projections(out_path(cfg, "counts"), counts, "counts", extra.dump());
    save_projections(out_path(cfg, "open_beam"), open, "counts", extra.dump());
    std::cout << "simulate: " << counts.nviews << " views, " << counts.nrows << "x"
              << counts.ncols << " detector, I0=" << cfg.acquisition.incident_counts
              << ", seed=" << cfg.acquisition.rng_seed << "\n";
    return 0;
}

int cmd_reconstruct(const ExperimentConfig& cfg, const std::string& method,
                    int views_stride) {
    const auto& names = method_names();
    if (std::find(names.begin(), names.end(), method) == names.end())
        throw config_error("unknown method " + method);
    echo_config(cfg);
    const PreparedScan scan = prepare_scan(cfg);

    std::vector<CostSample> trace;
    Volume recon;
    int n_views = cfg.geometry.view_count();
    std::string suffix = method;
    if (views_stride != 1) {
        const ViewSubset sub = subset_views(cfg.geometry, scan, views_stride);
        n_views = sub.geometry.view_count();
        suffix += "_s" + std::to_string(views_stride);
        recon = reconstruct_method(cfg, method, sub.geometry, sub.g, sub.g_clipped,
                                   sub.weights, &trace);
    } else {
        recon = reconstruct_method(cfg, method, cfg.geometry, scan.g, scan.g_clipped,
                                   scan.weights, &trace);
    }

    json extra{{"method", method}, {"n_views", n_views}, {"seed", cfg.seed}};
    if (is_mbir_method(method)) {
        extra["threshold_used"] =
            method == "mbir-thresholded" ? cfg.weight_threshold : 0.0;
        write_cost_trace(cfg, "cost_" + suffix + ".csv", trace);
    }
    save_volume(out_path(cfg, "recon_" + suffix), recon, "attenuation", extra.dump());
    write_slice_png(cfg, recon, "recon_" + suffix + ".png");

    const double e = nrmse(recon, scan.ground_truth, truth_mask(cfg));
    const double sd = region_stddev(recon, cladding_mask(cfg));
    append_metrics_row(cfg, "metrics.csv", suffix, n_views, e, sd);
    std::cout << "reconstruct " << suffix << ": n_views=" << n_views << " nrmse="
              << e << " cladding_stddev=" << sd << "\n";
    return 0;
}

int cmd_sparse_sweep(const ExperimentConfig& cfg) {
    echo_config(cfg);
    const PreparedScan scan = prepare_scan(cfg);
    const RegionMask mask = truth_mask(cfg);

    std::vector<int> factors = cfg.subsample_factors;
    if (std::find(factors.begin(), factors.end(), 1) == factors.end())
        factors.insert(factors.begin(), 1);
    std::sort(factors.begin(), factors.end());

    const std::vector<std::string> methods{"fdk-clipped", "mbir-thresholded"};
    for (const auto& method : methods) {
        ExperimentConfig run_cfg = cfg;
        Volume full_ref;
        for (int factor : factors) {
            const ViewSubset sub = subset_views(cfg.geometry, scan, factor);
            if (is_mbir_method(method) && run_cfg.solver.lipschitz <= 0.0) {
                // One bound for the sweep: dropping views only shrinks the
                // spectrum of A^T W A, so the full-view estimate stays valid
                // for every subset.
                WeightSet wt =
                    threshold_weights(sub.weights, run_cfg.weight_threshold);
                run_cfg.solver.lipschitz = estimate_lipschitz(
                    wt, sub.geometry, run_cfg.grid, &run_cfg.prior);
            }
            std::vector<CostSample> trace;
            Volume recon = reconstruct_method(run_cfg, method, sub.geometry, sub.g,
                                              sub.g_clipped, sub.weights, &trace);
            const std::string tag =
                method + "_f" + std::to_string(factor);
            json extra{{"method", method},
                       {"factor", factor},
                       {"n_views", sub.geometry.view_count()},
                       {"seed", cfg.seed}};
            save_volume(out_path(cfg, "sweep_" + tag), recon, "attenuation",
                        extra.dump());
            write_slice_png(cfg, recon, "sweep_" + tag + ".png");
            write_profile_csv(cfg, recon, "profile_" + tag + ".csv");
            if (is_mbir_method(method))
                write_cost_trace(cfg, "cost_sweep_" + tag + ".csv", trace);

            if (factor == 1) full_ref = recon;
            const double vs_full = nrmse(recon, full_ref, mask);
            const double vs_truth = nrmse(recon, scan.ground_truth, mask);
            append_csv_row(
                out_path(cfg, "sweep_metrics.csv"),
                "experiment,method,factor,n_views,nrmse_vs_full_ref_l2_masked,"
                "nrmse_vs_truth_ref_l2_masked",
                {cfg.id, method, std::to_string(factor),
                 std::to_string(sub.geometry.view_count()), csv_number(vs_full),
                 csv_number(vs_truth)});
            std::cout << "sweep " << tag << ": nrmse_vs_full=" << vs_full
                      << " nrmse_vs_truth=" << vs_truth << "\n";
        }
    }
    return 0;
}

int cmd_profile(const ExperimentConfig& cfg, const std::string& method) {
    echo_config(cfg);
    const Volume recon = load_volume(out_path(cfg, "recon_" + method));
    write_profile_csv(cfg, recon, "profile_" + method + ".csv");
    std::cout << "profile " << method << ": written\n";
    return 0;
}

int cmd_metrics(const ExperimentConfig& cfg, const std::string& method) {
    echo_config(cfg);
    const Volume recon = load_volume(out_path(cfg, "recon_" + method));
    const Volume truth = rasterize_phantom(cfg.phantom, cfg.grid);
    if (!(recon.grid == cfg.grid))
        throw config_error("metrics: reconstruction grid does not match config");
    const double e = nrmse(recon, truth, truth_mask(cfg));
    const double sd = region_stddev(recon, cladding_mask(cfg));
    append_metrics_row(cfg, "metrics.csv", method, cfg.geometry.view_count(), e, sd);
    std::cout << "metrics " << method << ": nrmse=" << e << " cladding_stddev=" << sd
              << "\n";
    return 0;
}

} // namespace cbct

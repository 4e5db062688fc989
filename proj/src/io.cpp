#include "cbct/io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace cbct {

using nlohmann::json;

namespace {

json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
}

std::string units_for_kind(const std::string& kind) {
    if (kind == "attenuation") return "1/mm";
    if (kind == "counts" || kind == "weights") return "counts";
    if (kind == "log_normalized") return "dimensionless";
    if (kind == "valid_mask") return "boolean";
    return "unknown";
}

void write_raw_f32(const std::string& path, const std::vector<double>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write " + path);
    std::vector<float> buf(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        buf[i] = static_cast<float>(data[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) throw config_error("short write to " + path);
}

std::vector<double> read_raw_f32(const std::string& path, std::size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open " + path);
    std::vector<float> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(float))
        throw config_error(path + ": file shorter than sidecar shape");
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) data[i] = buf[i];
    return data;
}

json sidecar_with_extra(json side, const std::string& extra) {
    if (!extra.empty()) {
        json e;
        try {
            e = json::parse(extra);
        } catch (const json::exception& err) {
            throw config_error(std::string("bad extra sidecar json: ") + err.what());
        }
        for (auto& [k, v] : e.items()) side[k] = v;
    }
    return side;
}

} // namespace

void save_volume(const std::string& base, const Volume& vol, const std::string& kind,
                 const std::string& extra_sidecar_json) {
    write_raw_f32(base + ".raw", vol.data);
    json side{{"kind", kind},
              {"dtype", "float32"},
              {"byte_order", "little-endian"},
              {"order", "x-fastest"},
              {"shape", {vol.grid.nx, vol.grid.ny, vol.grid.nz}},
              {"voxel_size", vol.grid.voxel_size},
              {"origin", {vol.grid.origin.x, vol.grid.origin.y, vol.grid.origin.z}},
              {"units", units_for_kind(kind)}};
    write_text_file(base + ".json",
                    sidecar_with_extra(std::move(side), extra_sidecar_json).dump(2) + "\n");
}

Volume load_volume(const std::string& base) {
    const json side = parse_json_file(base + ".json");
    VolumeGrid g;
    try {
        const auto& shape = side.at("shape");
        g.nx = shape.at(0).get<int>();
        g.ny = shape.at(1).get<int>();
        g.nz = shape.at(2).get<int>();
        g.voxel_size = side.at("voxel_size").get<double>();
        const auto& o = side.at("origin");
        g.origin = {o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()};
    } catch (const json::exception& e) {
        throw config_error(base + ".json: " + e.what());
    }
    Volume vol(g);
    vol.data = read_raw_f32(base + ".raw", g.voxel_count());
    return vol;
}

void save_projections(const std::string& base, const ProjectionStack& stack,
                      const std::string& kind, const std::string& extra_sidecar_json) {
    write_raw_f32(base + ".raw", stack.data);
    json side{{"kind", kind},
              {"dtype", "float32"},
              {"byte_order", "little-endian"},
              {"order", "col-fastest, then row, then view"},
              {"shape", {stack.nviews, stack.nrows, stack.ncols}},
              {"units", units_for_kind(kind)}};
    write_text_file(base + ".json",
                    sidecar_with_extra(std::move(side), extra_sidecar_json).dump(2) + "\n");
}

ProjectionStack load_projections(const std::string& base) {
    const json side = parse_json_file(base + ".json");
    int nviews, nrows, ncols;
    try {
        const auto& shape = side.at("shape");
        nviews = shape.at(0).get<int>();
        nrows = shape.at(1).get<int>();
        ncols = shape.at(2).get<int>();
    } catch (const json::exception& e) {
        throw config_error(base + ".json: " + e.what());
    }
    ProjectionStack stack(nviews, nrows, ncols);
    stack.data = read_raw_f32(base + ".raw", stack.data.size());
    return stack;
}

std::string sidecar_kind(const std::string& base) {
    const json side = parse_json_file(base + ".json");
    try {
        return side.at("kind").get<std::string>();
    } catch (const json::exception& e) {
        throw config_error(base + ".json: " + e.what());
    }
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_csv_row(const std::string& path, const std::string& header,
                    const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    const bool fresh = !std::filesystem::exists(path);
    std::string out = fresh ? header + "\n" + row : row;
    FILE* f = std::fopen(path.c_str(), "a");
    if (!f) throw config_error("cannot append to " + path);
    std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
}

ConeBeamGeometry load_geometry(const std::string& path) {
    const json j = parse_json_file(path);
    ConeBeamGeometry g;
    try {
        g.source_to_axis = j.at("source_to_axis").get<double>();
        g.source_to_detector = j.at("source_to_detector").get<double>();
        g.det_rows = j.at("det_rows").get<int>();
        g.det_cols = j.at("det_cols").get<int>();
        g.pixel_pitch = j.at("pixel_pitch").get<double>();
        g.shift_rows = j.value("shift_rows", 0.0);
        g.shift_cols = j.value("shift_cols", 0.0);
        if (j.contains("view_angles")) {
            g.view_angles = j.at("view_angles").get<std::vector<double>>();
        } else if (j.contains("uniform_view_angles")) {
            g.view_angles = uniform_view_angles(j.at("uniform_view_angles").get<int>());
        } else {
            throw config_error(path + ": need view_angles or uniform_view_angles");
        }
    } catch (const json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    g.validate();
    return g;
}

void save_geometry(const std::string& path, const ConeBeamGeometry& geom) {
    json j{{"source_to_axis", geom.source_to_axis},
           {"source_to_detector", geom.source_to_detector},
           {"det_rows", geom.det_rows},
           {"det_cols", geom.det_cols},
           {"pixel_pitch", geom.pixel_pitch},
           {"shift_rows", geom.shift_rows},
           {"shift_cols", geom.shift_cols},
           {"view_angles", geom.view_angles}};
    write_text_file(path, j.dump(2) + "\n");
}

TrisoPhantomSpec load_phantom_spec(const std::string& path) {
    const json j = parse_json_file(path);
    TrisoPhantomSpec spec;
    try {
        if (j.contains("center")) {
            const auto& c = j.at("center");
            spec.center = {c.at(0).get<double>(), c.at(1).get<double>(),
                           c.at(2).get<double>()};
        }
        for (const auto& s : j.at("shells")) {
            spec.shells.push_back(
                {s.at("outer_radius").get<double>(), s.at("attenuation").get<double>()});
        }
        spec.background_attenuation = j.value("background_attenuation", 0.0);
        if (j.contains("defects")) {
            for (const auto& d : j.at("defects")) {
                const auto& c = d.at("center");
                spec.defects.push_back({{c.at(0).get<double>(), c.at(1).get<double>(),
                                         c.at(2).get<double>()},
                                        d.at("radius").get<double>()});
            }
        }
    } catch (const json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    spec.validate();
    return spec;
}

AcquisitionParams load_acquisition(const std::string& path, int nviews) {
    const json j = parse_json_file(path);
    AcquisitionParams p;
    try {
        p.incident_counts = j.at("incident_counts").get<double>();
        p.rng_seed = j.value("rng_seed", std::uint64_t{0});
        p.impulse_rate = j.value("impulse_rate", 0.0);
        p.impulse_amplitude = j.value("impulse_amplitude", 0.0);
        p.enable_poisson = j.value("enable_poisson", true);
        if (j.contains("shift_pattern") && !j.at("shift_pattern").is_null()) {
            const auto& sp = j.at("shift_pattern");
            if (sp.is_array()) {
                for (const auto& s : sp)
                    p.shift_pattern.push_back(
                        {s.at(0).get<int>(), s.at(1).get<int>()});
            } else {
                // {"period": P, "drow": a, "dcol": b}: every P-th view
                // (v % P == P-1) was taken with the panel displaced.
                const int period = sp.at("period").get<int>();
                if (period < 1) throw config_error(path + ": period must be >= 1");
                const int drow = sp.value("drow", 0);
                const int dcol = sp.value("dcol", 0);
                p.shift_pattern.assign(static_cast<std::size_t>(nviews), ViewShift{});
                for (int v = period - 1; v < nviews; v += period)
                    p.shift_pattern[static_cast<std::size_t>(v)] = {drow, dcol};
            }
        }
    } catch (const json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    p.validate(nviews);
    return p;
}

void write_png_slice(const std::string& path, const Volume& vol, int iz,
                     double lo, double hi) {
    if (iz < 0 || iz >= vol.grid.nz)
        throw config_error("write_png_slice: slice index out of range");
    if (!(hi > lo)) throw config_error("write_png_slice: window must have hi > lo");
    const int w = vol.grid.nx, h = vol.grid.ny;
    std::vector<unsigned char> img(static_cast<std::size_t>(w) * h);
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            double t = (vol.at(ix, iy, iz) - lo) / (hi - lo);
            t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
            // Row 0 at the top = largest y, so the image is viewed with +x
            // right and +y up.
            img[static_cast<std::size_t>(h - 1 - iy) * w + ix] =
                static_cast<unsigned char>(t * 255.0 + 0.5);
        }
    }

    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw config_error("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(f);
        throw config_error("png write failed for " + path);
    }
    png_init_io(png, f);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h),
                 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int row = 0; row < h; ++row)
        png_write_row(png, img.data() + static_cast<std::size_t>(row) * w);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);

    json side{{"window_lo", lo}, {"window_hi", hi}, {"slice_axis", "z"},
              {"slice_index", iz}};
    write_text_file(path + ".json", side.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw config_error("short write to " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace cbct

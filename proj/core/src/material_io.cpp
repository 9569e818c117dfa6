#include "chordkit/material_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "chordkit/error.hpp"
#include "chordkit/image_io.hpp"
#include "chordkit/log.hpp"

namespace chordkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

TextureImage decode_normal_map(const TextureImage& encoded) {
    if (encoded.channels() != 3) {
        throw IoError("normal.png must be an RGB image");
    }
    const auto d = encoded.data();
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); i += 3) {
        const Vec3 n = decode_normal({d[i], d[i + 1], d[i + 2]});
        if (n.z <= 0.0) {
            throw IoError("normal.png pixel " + std::to_string(i / 3) + " points below the surface");
        }
        out[i] = n.x;
        out[i + 1] = n.y;
        out[i + 2] = n.z;
    }
    return TextureImage(encoded.width(), encoded.height(), 3, std::move(out));
}

TextureImage encode_normal_map(const TextureImage& normal) {
    std::vector<double> out(normal.data().begin(), normal.data().end());
    for (double& v : out) {
        v = (v + 1.0) * 0.5;
    }
    return TextureImage(normal.width(), normal.height(), 3, std::move(out));
}

TextureImage load_gray(const fs::path& path) {
    TextureImage img = read_png(path, ColorSpace::Linear);
    if (img.channels() != 1) {
        // Tools often save grayscale maps as RGB; take the first channel.
        return img.channel(0);
    }
    return img;
}

TextureImage centered(std::vector<double> data, int w, int h) {
    double mean = 0.0;
    for (double v : data) {
        mean += v;
    }
    mean /= static_cast<double>(data.size());
    for (double& v : data) {
        v -= mean;
    }
    return TextureImage(w, h, 1, std::move(data));
}

MaterialMeta parse_meta(const std::string& text, const fs::path& path) {
    MaterialMeta meta;
    try {
        const json j = json::parse(text);
        if (j.contains("height")) {
            meta.height.scale = j.at("height").at("scale").get<double>();
            meta.height.offset = j.at("height").at("offset").get<double>();
        }
        if (j.contains("pixel_scale")) {
            meta.pixel_scale = j.at("pixel_scale").get<double>();
        }
    } catch (const json::exception& e) {
        throw IoError("'" + path.string() + "': " + e.what());
    }
    return meta;
}

json score_json(const ChannelScore& s) {
    json j;
    j["psnr_db"] = std::isinf(s.psnr_db) ? json("inf") : json(s.psnr_db);
    j["mse"] = s.mse;
    return j;
}

}  // namespace

HeightEncoding height_encoding_for(const TextureImage& height) {
    const auto [lo, hi] = std::ranges::minmax_element(height.data());
    return {*hi - *lo, *lo};
}

LoadedMaterial load_material_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("material directory '" + dir.string() + "' does not exist");
    }
    const fs::path base_path = dir / MaterialDirLayout::kBasecolor;
    if (!fs::exists(base_path)) {
        throw IoError("missing " + base_path.string());
    }
    TextureImage base_srgb = read_png(base_path, ColorSpace::SRGB);
    if (base_srgb.channels() != 3) {
        throw IoError("basecolor.png must be an RGB image");
    }
    TextureImage basecolor = srgb_to_linear(base_srgb);
    const int w = basecolor.width();
    const int h = basecolor.height();

    LoadedMaterial out{MaterialSet::without_height(basecolor, flat_normal_map(w, h),
                                                   TextureImage::filled(w, h, 1, kDefaultRoughness),
                                                   TextureImage::filled(w, h, 1, kDefaultMetalness)),
                       {},
                       {}};
    const fs::path meta_path = dir / MaterialDirLayout::kMeta;
    if (fs::exists(meta_path)) {
        out.meta = parse_meta(read_text_file(meta_path), meta_path);
    }

    auto optional_channel = [&](const char* file, const char* name, auto&& load,
                                TextureImage fallback) {
        const fs::path p = dir / file;
        if (!fs::exists(p)) {
            log_warning(std::string("material '") + dir.string() + "': " + file +
                        " missing, using default " + name);
            out.defaulted.emplace_back(name);
            return fallback;
        }
        TextureImage img = load(p);
        require_same_resolution(img, basecolor, p.string());
        return img;
    };

    TextureImage normal = optional_channel(
        MaterialDirLayout::kNormal, "normal",
        [](const fs::path& p) { return decode_normal_map(read_png(p, ColorSpace::Linear)); },
        flat_normal_map(w, h));
    TextureImage roughness = optional_channel(MaterialDirLayout::kRoughness, "roughness", load_gray,
                                              TextureImage::filled(w, h, 1, kDefaultRoughness));
    TextureImage metalness = optional_channel(MaterialDirLayout::kMetalness, "metalness", load_gray,
                                              TextureImage::filled(w, h, 1, kDefaultMetalness));
    const HeightEncoding enc = out.meta.height;
    TextureImage height = optional_channel(
        MaterialDirLayout::kHeight, "height",
        [&](const fs::path& p) {
            TextureImage stored = load_gray(p);
            std::vector<double> d(stored.data().begin(), stored.data().end());
            for (double& v : d) {
                v = v * enc.scale + enc.offset;
            }
            return centered(std::move(d), w, h);
        },
        TextureImage::filled(w, h, 1, 0.0));

    out.material = MaterialSet(std::move(basecolor), std::move(normal), std::move(height),
                               std::move(roughness), std::move(metalness));
    return out;
}

void save_material_dir(const fs::path& dir, const MaterialSet& material, double pixel_scale) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    }
    write_png(dir / MaterialDirLayout::kBasecolor, linear_to_srgb(material.basecolor()));
    write_png(dir / MaterialDirLayout::kNormal, encode_normal_map(material.normal()));
    write_png(dir / MaterialDirLayout::kRoughness, material.roughness());
    write_png(dir / MaterialDirLayout::kMetalness, material.metalness());

    const HeightEncoding enc = height_encoding_for(material.height());
    std::vector<double> stored(material.height().data().begin(), material.height().data().end());
    for (double& v : stored) {
        v = enc.scale > 0.0 ? (v - enc.offset) / enc.scale : 0.0;
    }
    write_png(dir / MaterialDirLayout::kHeight,
              TextureImage(material.width(), material.height_px(), 1, std::move(stored)));

    json meta;
    meta["schema"] = "chordkit.material_meta/v1";
    meta["height"] = {{"scale", enc.scale}, {"offset", enc.offset}};
    meta["pixel_scale"] = pixel_scale;
    write_text_file(dir / MaterialDirLayout::kMeta, meta.dump(2) + "\n");
}

std::string light_estimate_to_json(const LightEstimate& estimate) {
    const auto& l = estimate.light;
    json j;
    j["schema"] = "chordkit.light_estimate/v1";
    j["direction"] = {l.direction().x, l.direction().y, l.direction().z};
    j["azimuth_deg"] = l.azimuth_deg();
    j["elevation_deg"] = l.elevation_deg();
    j["radiance"] = {l.radiance().x, l.radiance().y, l.radiance().z};
    j["intensity_scale"] = estimate.intensity_scale;
    j["residual_mse"] = estimate.residual_mse;
    return j.dump(2) + "\n";
}

LightEstimate light_estimate_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const auto d = j.at("direction").get<std::array<double, 3>>();
        const auto r = j.at("radiance").get<std::array<double, 3>>();
        return {DirectionalLight(Vec3(d[0], d[1], d[2]), Rgb(r[0], r[1], r[2])),
                j.at("intensity_scale").get<double>(), j.at("residual_mse").get<double>()};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("light estimate: ") + e.what());
    }
}

std::string eval_report_to_json(const EvalReport& report, const LightBattery& battery) {
    json j;
    j["schema"] = "chordkit.eval_report/v1";
    json channels = json::object();
    for (const auto& [name, s] : report.per_channel) {
        channels[name] = score_json(s);
    }
    j["per_channel"] = channels;
    j["relit"] = score_json(report.relit);
    json per_light = json::array();
    for (std::size_t i = 0; i < report.relit_per_light.size(); ++i) {
        json e = score_json(report.relit_per_light[i]);
        e["name"] = i < battery.lights().size() ? battery.lights()[i].name : std::to_string(i);
        per_light.push_back(e);
    }
    j["relit_per_light"] = per_light;
    j["battery_version"] = battery.version();
    j["seam_energy"] = std::isinf(report.seam_energy) ? json("inf") : json(report.seam_energy);
    j["lpips"] = "unavailable";
    return j.dump(2) + "\n";
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace chordkit

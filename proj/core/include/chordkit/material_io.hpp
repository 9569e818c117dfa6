#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chordkit/chain.hpp"
#include "chordkit/material.hpp"
#include "chordkit/metrics.hpp"

namespace chordkit {

// Affine map from the stored [0,1] height PNG back to height units:
// height = png * scale + offset (then re-centered to mean zero on load).
struct HeightEncoding {
    double scale = 1.0;
    double offset = 0.0;
};

struct MaterialMeta {
    HeightEncoding height;
    double pixel_scale = 1.0;
};

// Directory layout: basecolor.png (sRGB), normal.png, roughness.png,
// metalness.png, height.png (linear, 16-bit) and meta.json.
struct MaterialDirLayout {
    static constexpr const char* kBasecolor = "basecolor.png";
    static constexpr const char* kNormal = "normal.png";
    static constexpr const char* kRoughness = "roughness.png";
    static constexpr const char* kMetalness = "metalness.png";
    static constexpr const char* kHeight = "height.png";
    static constexpr const char* kMeta = "meta.json";
};

inline constexpr double kDefaultRoughness = 0.5;
inline constexpr double kDefaultMetalness = 0.0;

struct LoadedMaterial {
    MaterialSet material;
    MaterialMeta meta;
    // Channels that were missing and filled with defaults.
    std::vector<std::string> defaulted;
};

// Throws IoError when the directory or basecolor.png is missing.
LoadedMaterial load_material_dir(const std::filesystem::path& dir);

void save_material_dir(const std::filesystem::path& dir, const MaterialSet& material,
                       double pixel_scale = 1.0);

// Min-max encoding used for height.png.
HeightEncoding height_encoding_for(const TextureImage& height);

// --- JSON documents ------------------------------------------------------

std::string light_estimate_to_json(const LightEstimate& estimate);
LightEstimate light_estimate_from_json(const std::string& text);

// Infinite PSNR values serialize as the string "inf".
std::string eval_report_to_json(const EvalReport& report, const LightBattery& battery);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace chordkit

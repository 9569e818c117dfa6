#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "chordkit/chain.hpp"
#include "chordkit/loss.hpp"
#include "chordkit/material.hpp"

namespace chordkit {

struct LightConfig {
    double azimuth_deg = 0.0;
    double elevation_deg = 90.0;
    Rgb radiance{3.141592653589793};

    DirectionalLight to_light() const {
        return DirectionalLight::from_angles(azimuth_deg, elevation_deg, radiance);
    }
};

// Settings shared by the command-line verbs. Parsing is strict: unknown keys
// and wrong types raise ConfigError.
//
// {
//   "light": {"azimuth_deg": 30, "elevation_deg": 45, "radiance": 3.14159 | [r, g, b]},
//   "rm_search": {"roughness_levels": [...], "metalness_levels": [0, 1]},
//   "optimizer": {"step_size": 0.05, "iterations": 200, "render_light_samples": 8,
//                 "max_halvings": 8,
//                 "weights": {"pixel": 1, "normal": 1, "render": 1, "perceptual": 0.005}},
//   "irradiance_channels": 1,
//   "height_scale": 1.0,
//   "seed": 0,
//   "output_dir": "out"
// }
struct RunConfig {
    LightConfig light;
    RmSearchSpace rm_search = RmSearchSpace::standard();
    OptimConfig optimizer;
    int irradiance_channels = 1;
    double height_scale = 1.0;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> output_dir;

    ChainOptions chain_options() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace chordkit

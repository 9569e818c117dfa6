#pragma once

#include <array>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "chordkit/image.hpp"
#include "chordkit/material.hpp"

namespace chordkit {

// Returned by psnr() for identical images.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

double mse(const TextureImage& a, const TextureImage& b);

// 10 log10(1 / mse) for [0,1] data; +inf when mse == 0.
double psnr(const TextureImage& a, const TextureImage& b);

double psnr_from_mse(double mse);

struct NamedLight {
    std::string name;
    DirectionalLight light;
};

class LightBattery {
public:
    explicit LightBattery(std::vector<NamedLight> lights);

    // The nine-light battery shipped as light_battery_v1.json.
    static LightBattery standard();
    static LightBattery from_json(const std::string& json_text);

    const std::vector<NamedLight>& lights() const { return lights_; }
    int version() const { return version_; }

private:
    std::vector<NamedLight> lights_;
    int version_ = 1;
};

struct ChannelScore {
    double psnr_db = 0.0;
    double mse = 0.0;
};

struct EvalReport {
    // basecolor, normal, roughness, metalness, height
    std::map<std::string, ChannelScore> per_channel;
    // Mean over the battery of per-light PSNR and MSE.
    ChannelScore relit;
    std::vector<ChannelScore> relit_per_light;
    double seam_energy = 0.0;
    // Perceptual metrics are not computed; kept so the schema can grow.
    bool lpips_available = false;
};

// Per-channel PSNR (normals on their (n+1)/2 encoding, heights after a
// least-squares gain/offset fit and min-max normalization of the reference),
// relit PSNR over the battery on renders clamped to [0,1], and the seam
// energy of the predicted height.
EvalReport evaluate_material(const MaterialSet& pred, const MaterialSet& gt,
                             const LightBattery& battery = LightBattery::standard());

// Mean squared wrap-around difference (last/first column and row) divided by
// the mean squared difference of interior neighbors. 0 for constant images.
double seam_energy(const TextureImage& img);

}  // namespace chordkit

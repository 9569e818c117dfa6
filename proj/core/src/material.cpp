#include "chordkit/material.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chordkit/error.hpp"

namespace chordkit {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void require_channels(const TextureImage& img, int channels, const char* name) {
    if (img.channels() != channels) {
        throw ValidationError(std::string(name) + " must have " + std::to_string(channels) +
                              " channel(s)");
    }
    if (img.space() != ColorSpace::Linear) {
        throw ValidationError(std::string(name) + " must be stored linear");
    }
}

void require_unit_range(const TextureImage& img, const char* name) {
    for (double v : img.data()) {
        if (v < 0.0 || v > 1.0) {
            throw ValidationError(std::string(name) + " sample outside [0,1]");
        }
    }
}

}  // namespace

DirectionalLight::DirectionalLight(Vec3 direction, Rgb radiance)
    : direction_(direction), radiance_(radiance) {
    if (!is_finite(direction) || std::abs(length(direction) - 1.0) > 1e-6) {
        throw ValidationError("light direction must be a unit vector");
    }
    if (direction.z <= 0.0) {
        throw ValidationError("light direction must point into the upper hemisphere (z > 0)");
    }
    if (!is_finite(radiance) || radiance.x < 0.0 || radiance.y < 0.0 || radiance.z < 0.0) {
        throw ValidationError("light radiance must be finite and nonnegative");
    }
}

DirectionalLight DirectionalLight::from_angles(double azimuth_deg, double elevation_deg,
                                               Rgb radiance) {
    const double az = azimuth_deg * kDeg;
    const double el = elevation_deg * kDeg;
    Vec3 dir{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
    return {normalize(dir), radiance};
}

double DirectionalLight::azimuth_deg() const {
    double az = std::atan2(direction_.y, direction_.x) / kDeg;
    return az < 0.0 ? az + 360.0 : az;
}

double DirectionalLight::elevation_deg() const {
    return std::asin(std::clamp(direction_.z, -1.0, 1.0)) / kDeg;
}

double angular_distance_deg(const Vec3& a, const Vec3& b) {
    // atan2 form stays accurate for nearly parallel vectors.
    return std::atan2(length(cross(a, b)), dot(a, b)) / kDeg;
}

Rgb encode_normal(const Vec3& n) { return (n + Vec3(1.0)) * 0.5; }

Vec3 decode_normal(const Rgb& rgb) {
    const Vec3 v = rgb * 2.0 - Vec3(1.0);
    const double len = length(v);
    if (!(len >= 1e-3)) {
        throw ValidationError("normal decodes to a near-zero vector");
    }
    return v / len;
}

TextureImage flat_normal_map(int width, int height) {
    std::vector<double> data(static_cast<std::size_t>(width) * height * 3, 0.0);
    for (std::size_t i = 2; i < data.size(); i += 3) {
        data[i] = 1.0;
    }
    return TextureImage(width, height, 3, std::move(data));
}

void validate_normal_map(const TextureImage& normal) {
    require_channels(normal, 3, "normal");
    const auto d = normal.data();
    for (std::size_t i = 0; i < d.size(); i += 3) {
        const double len = std::sqrt(d[i] * d[i] + d[i + 1] * d[i + 1] + d[i + 2] * d[i + 2]);
        if (std::abs(len - 1.0) > kNormalUnitTolerance) {
            throw ValidationError("normal map pixel " + std::to_string(i / 3) +
                                  " is not unit length");
        }
        if (d[i + 2] <= 0.0) {
            throw ValidationError("normal map pixel " + std::to_string(i / 3) +
                                  " has non-positive z");
        }
    }
}

MaterialSet::MaterialSet(TextureImage basecolor, TextureImage normal, TextureImage height,
                         TextureImage roughness, TextureImage metalness)
    : basecolor_(std::move(basecolor)),
      normal_(std::move(normal)),
      height_(std::move(height)),
      roughness_(std::move(roughness)),
      metalness_(std::move(metalness)) {
    require_channels(basecolor_, 3, "basecolor");
    require_channels(height_, 1, "height");
    require_channels(roughness_, 1, "roughness");
    require_channels(metalness_, 1, "metalness");
    require_same_resolution(basecolor_, normal_, "MaterialSet normal");
    require_same_resolution(basecolor_, height_, "MaterialSet height");
    require_same_resolution(basecolor_, roughness_, "MaterialSet roughness");
    require_same_resolution(basecolor_, metalness_, "MaterialSet metalness");
    validate_normal_map(normal_);
    require_unit_range(basecolor_, "basecolor");
    require_unit_range(roughness_, "roughness");
    require_unit_range(metalness_, "metalness");
    if (std::abs(height_.mean()) > kHeightMeanTolerance) {
        throw ValidationError("height map must be mean-zero");
    }
}

MaterialSet MaterialSet::without_height(TextureImage basecolor, TextureImage normal,
                                        TextureImage roughness, TextureImage metalness) {
    TextureImage height = TextureImage::filled(basecolor.width(), basecolor.height(), 1, 0.0);
    return {std::move(basecolor), std::move(normal), std::move(height), std::move(roughness),
            std::move(metalness)};
}

}  // namespace chordkit

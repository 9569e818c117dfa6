#pragma once

#include "chordkit/image.hpp"
#include "chordkit/vec.hpp"

namespace chordkit {

// Directional light. `direction` points from the surface toward the light
// and lies in the upper hemisphere; `radiance` is linear RGB.
class DirectionalLight {
public:
    DirectionalLight(Vec3 direction, Rgb radiance);

    // Azimuth is measured counter-clockwise from +x (image right) toward +y
    // (image up); elevation from the surface plane.
    static DirectionalLight from_angles(double azimuth_deg, double elevation_deg, Rgb radiance);

    const Vec3& direction() const { return direction_; }
    const Rgb& radiance() const { return radiance_; }

    double azimuth_deg() const;
    double elevation_deg() const;

    DirectionalLight with_radiance(Rgb radiance) const { return {direction_, radiance}; }

private:
    Vec3 direction_;
    Rgb radiance_;
};

// Angle between two directions in degrees.
double angular_distance_deg(const Vec3& a, const Vec3& b);

struct ViewConfig {
    Vec3 view_direction{0.0, 0.0, 1.0};

    static ViewConfig top_down() { return {}; }
};

// Tangent-space normal <-> [0,1] RGB encoding, rgb = (n + 1) / 2.
Rgb encode_normal(const Vec3& n);
// Renormalizes; throws ValidationError when the decoded vector is shorter
// than 1e-3.
Vec3 decode_normal(const Rgb& rgb);

inline Vec3 normal_at(const TextureImage& normal, int x, int y) {
    const std::size_t o = normal.offset(x, y);
    const auto d = normal.data();
    return {d[o], d[o + 1], d[o + 2]};
}

// Unit normal map with +z everywhere.
TextureImage flat_normal_map(int width, int height);

// The five SVBRDF channels at a shared resolution: linear basecolor (3ch),
// tangent-space unit normals (3ch, z > 0), mean-zero height (1ch), roughness
// and metalness (1ch each, [0,1]).
class MaterialSet {
public:
    MaterialSet(TextureImage basecolor, TextureImage normal, TextureImage height,
                TextureImage roughness, TextureImage metalness);

    // Height left at zero; useful wherever height is derived later.
    static MaterialSet without_height(TextureImage basecolor, TextureImage normal,
                                      TextureImage roughness, TextureImage metalness);

    const TextureImage& basecolor() const { return basecolor_; }
    const TextureImage& normal() const { return normal_; }
    const TextureImage& height() const { return height_; }
    const TextureImage& roughness() const { return roughness_; }
    const TextureImage& metalness() const { return metalness_; }

    int width() const { return basecolor_.width(); }
    int height_px() const { return basecolor_.height(); }

    MaterialSet with_height(TextureImage height) const {
        return {basecolor_, normal_, std::move(height), roughness_, metalness_};
    }

    bool operator==(const MaterialSet&) const = default;

private:
    TextureImage basecolor_;
    TextureImage normal_;
    TextureImage height_;
    TextureImage roughness_;
    TextureImage metalness_;
};

// Tolerances used by MaterialSet validation.
inline constexpr double kNormalUnitTolerance = 1e-4;
inline constexpr double kHeightMeanTolerance = 1e-5;

// Checks a 3ch map holds unit normals with z > 0; throws ValidationError.
void validate_normal_map(const TextureImage& normal);

}  // namespace chordkit

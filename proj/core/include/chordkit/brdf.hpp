#pragma once

#include "chordkit/material.hpp"
#include "chordkit/vec.hpp"

namespace chordkit {

// Roughness floor applied before the GGX remapping alpha = roughness^2.
inline constexpr double kMinRoughness = 0.01;
// Normal-incidence reflectance of dielectrics.
inline constexpr double kDielectricF0 = 0.04;
// Guard added to the 4 (n.v)(n.l) specular denominator.
inline constexpr double kSpecularEpsilon = 1e-6;

// Trowbridge-Reitz / GGX normal distribution with alpha = max(roughness, kMinRoughness)^2.
double ggx_ndf(double n_dot_h, double roughness);

// Smith-Schlick geometry term with the direct-lighting remapping
// k = (roughness + 1)^2 / 8. Dot products are clamped to [0,1].
double schlick_ggx_geometry(double n_dot_v, double n_dot_l, double roughness);

Rgb fresnel_schlick(double h_dot_v, const Rgb& f0);

// One pixel of the material without height.
struct BrdfSample {
    Rgb basecolor;
    Vec3 normal;
    double roughness;
    double metalness;

    BrdfSample(Rgb basecolor_, Vec3 normal_, double roughness_, double metalness_);
};

BrdfSample sample_at(const MaterialSet& mat, int x, int y);

// Partial derivatives of the shaded color. Rows index the output channel.
// d_normal is projected onto the tangent plane of the normal, i.e. it is the
// derivative of the color as a function of normalize(n).
struct ShadingJacobian {
    Mat3 d_basecolor{};
    Rgb d_roughness;
    Rgb d_metalness;
    Mat3 d_normal{};
};

struct ShadeResult {
    Rgb color;
    ShadingJacobian jacobian;
};

// Cook-Torrance shading of one pixel:
//   [ (1 - F) b / pi (1 - m) + D G F / (4 (n.v)(n.l) + eps) ] (n.l)+ radiance
// with F0 = lerp(0.04, b, m). Back-facing light (n.l <= 0) yields black.
Rgb shade_pixel(const BrdfSample& s, const DirectionalLight& light, const ViewConfig& view);

// Same color bit-for-bit, plus analytic partials.
ShadeResult shade_pixel_with_jacobian(const BrdfSample& s, const DirectionalLight& light,
                                      const ViewConfig& view);

}  // namespace chordkit

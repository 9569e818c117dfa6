#pragma once

// Shared building blocks of the Cook-Torrance evaluation. The renderer, the
// Jacobian, and the batched grid search all go through these functions in the
// same order so their colors agree bit-for-bit.

#include <algorithm>
#include <numbers>

#include "chordkit/brdf.hpp"

namespace chordkit::detail {

inline constexpr double kInvPi = 1.0 / std::numbers::pi;

// Light/view dependent terms of one pixel.
struct Geometry {
    bool lit = false;
    double n_dot_l = 0.0;
    double n_dot_v = 0.0;
    double n_dot_h = 0.0;
    double h_dot_v = 0.0;
    double fresnel_weight = 0.0;  // (1 - h.v)^5
};

// Half vector and h.v depend only on the light and view.
struct LightFrame {
    Vec3 l;
    Vec3 v;
    Vec3 h;
    double h_dot_v;
    double fresnel_weight;
};

inline LightFrame light_frame(const Vec3& l, const Vec3& v) {
    LightFrame f;
    f.l = l;
    f.v = v;
    f.h = normalize(l + v);
    f.h_dot_v = std::clamp(dot(f.h, v), 0.0, 1.0);
    const double one_minus = 1.0 - f.h_dot_v;
    const double sq = one_minus * one_minus;
    f.fresnel_weight = sq * sq * one_minus;
    return f;
}

inline Geometry geometry(const Vec3& n, const LightFrame& f) {
    Geometry g;
    const double nl = dot(n, f.l);
    if (!(nl > 0.0)) {
        return g;
    }
    g.lit = true;
    g.n_dot_l = std::min(nl, 1.0);
    g.n_dot_v = std::clamp(dot(n, f.v), 0.0, 1.0);
    g.n_dot_h = std::clamp(dot(n, f.h), 0.0, 1.0);
    g.h_dot_v = f.h_dot_v;
    g.fresnel_weight = f.fresnel_weight;
    return g;
}

inline double effective_roughness(double roughness) { return std::max(roughness, kMinRoughness); }

inline double ndf(double n_dot_h, double r_eff) {
    const double alpha = r_eff * r_eff;
    const double a2 = alpha * alpha;
    const double t = n_dot_h * n_dot_h * (a2 - 1.0) + 1.0;
    return a2 * kInvPi / (t * t);
}

inline double geometry_k(double r_eff) { return (r_eff + 1.0) * (r_eff + 1.0) / 8.0; }

inline double g1(double x, double k) { return x / (x * (1.0 - k) + k); }

// D G / (4 (n.v)(n.l) + eps): the roughness-dependent, metalness-independent
// factor of the specular lobe.
inline double specular_scale(const Geometry& g, double r_eff) {
    const double d = ndf(g.n_dot_h, r_eff);
    const double k = geometry_k(r_eff);
    const double gg = g1(g.n_dot_v, k) * g1(g.n_dot_l, k);
    return d * gg / (4.0 * g.n_dot_v * g.n_dot_l + kSpecularEpsilon);
}

inline double f0_channel(double basecolor, double metalness) {
    return kDielectricF0 + (basecolor - kDielectricF0) * metalness;
}

inline double fresnel_channel(double f0, double weight) { return f0 + (1.0 - f0) * weight; }

inline double shade_channel(const Geometry& g, double spec_scale, double basecolor,
                            double metalness, double radiance) {
    const double f = fresnel_channel(f0_channel(basecolor, metalness), g.fresnel_weight);
    const double diffuse = (1.0 - f) * basecolor * kInvPi * (1.0 - metalness);
    return (diffuse + f * spec_scale) * g.n_dot_l * radiance;
}

inline Rgb shade(const Geometry& g, double spec_scale, const Rgb& basecolor, double metalness,
                 const Rgb& radiance) {
    if (!g.lit) {
        return {};
    }
    return {shade_channel(g, spec_scale, basecolor.x, metalness, radiance.x),
            shade_channel(g, spec_scale, basecolor.y, metalness, radiance.y),
            shade_channel(g, spec_scale, basecolor.z, metalness, radiance.z)};
}

}  // namespace chordkit::detail

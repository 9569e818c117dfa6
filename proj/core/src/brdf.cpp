#include "chordkit/brdf.hpp"

#include <cmath>

#include "chordkit/error.hpp"
#include "shading_kernel.hpp"

namespace chordkit {

using detail::effective_roughness;

double ggx_ndf(double n_dot_h, double roughness) {
    return detail::ndf(std::clamp(n_dot_h, 0.0, 1.0), effective_roughness(roughness));
}

double schlick_ggx_geometry(double n_dot_v, double n_dot_l, double roughness) {
    const double k = detail::geometry_k(roughness);
    return detail::g1(std::clamp(n_dot_v, 0.0, 1.0), k) * detail::g1(std::clamp(n_dot_l, 0.0, 1.0), k);
}

Rgb fresnel_schlick(double h_dot_v, const Rgb& f0) {
    const double one_minus = 1.0 - std::clamp(h_dot_v, 0.0, 1.0);
    const double sq = one_minus * one_minus;
    const double w = sq * sq * one_minus;
    return {detail::fresnel_channel(f0.x, w), detail::fresnel_channel(f0.y, w),
            detail::fresnel_channel(f0.z, w)};
}

BrdfSample::BrdfSample(Rgb basecolor_, Vec3 normal_, double roughness_, double metalness_)
    : basecolor(basecolor_), normal(normal_), roughness(roughness_), metalness(metalness_) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(basecolor.x) || !in_unit(basecolor.y) || !in_unit(basecolor.z)) {
        throw ValidationError("BrdfSample basecolor outside [0,1]");
    }
    if (!in_unit(roughness) || !in_unit(metalness)) {
        throw ValidationError("BrdfSample roughness/metalness outside [0,1]");
    }
    if (!is_finite(normal) || std::abs(length(normal) - 1.0) > kNormalUnitTolerance) {
        throw ValidationError("BrdfSample normal is not unit length");
    }
}

BrdfSample sample_at(const MaterialSet& mat, int x, int y) {
    const auto b = mat.basecolor().data();
    const std::size_t o = mat.basecolor().offset(x, y);
    return BrdfSample({b[o], b[o + 1], b[o + 2]}, normal_at(mat.normal(), x, y),
                      mat.roughness().at(x, y), mat.metalness().at(x, y));
}

Rgb shade_pixel(const BrdfSample& s, const DirectionalLight& light, const ViewConfig& view) {
    const auto frame = detail::light_frame(light.direction(), view.view_direction);
    const auto g = detail::geometry(s.normal, frame);
    if (!g.lit) {
        return {};
    }
    const double spec = detail::specular_scale(g, effective_roughness(s.roughness));
    return detail::shade(g, spec, s.basecolor, s.metalness, light.radiance());
}

ShadeResult shade_pixel_with_jacobian(const BrdfSample& s, const DirectionalLight& light,
                                      const ViewConfig& view) {
    ShadeResult out;
    const auto frame = detail::light_frame(light.direction(), view.view_direction);
    const auto g = detail::geometry(s.normal, frame);
    if (!g.lit) {
        return out;
    }
    const double r_eff = effective_roughness(s.roughness);
    const double spec = detail::specular_scale(g, r_eff);
    out.color = detail::shade(g, spec, s.basecolor, s.metalness, light.radiance());

    const double m = s.metalness;
    const double w = g.fresnel_weight;
    const double nl = g.n_dot_l;
    const double nv = g.n_dot_v;
    const double nh = g.n_dot_h;

    // Lobe pieces and their derivatives.
    const double alpha = r_eff * r_eff;
    const double a2 = alpha * alpha;
    const double t = nh * nh * (a2 - 1.0) + 1.0;
    const double d = a2 * detail::kInvPi / (t * t);
    const double k = detail::geometry_k(r_eff);
    const double qv = nv * (1.0 - k) + k;
    const double ql = nl * (1.0 - k) + k;
    const double g1v = nv / qv;
    const double g1l = nl / ql;
    const double gg = g1v * g1l;
    const double den = 4.0 * nv * nl + kSpecularEpsilon;

    // Roughness only acts above the floor.
    double dspec_dr = 0.0;
    if (s.roughness > kMinRoughness) {
        const double dd_da2 = (t - 2.0 * a2 * nh * nh) * detail::kInvPi / (t * t * t);
        const double dd_dr = dd_da2 * 4.0 * r_eff * r_eff * r_eff;
        const double dk_dr = (r_eff + 1.0) / 4.0;
        const double dg1v_dk = -nv * (1.0 - nv) / (qv * qv);
        const double dg1l_dk = -nl * (1.0 - nl) / (ql * ql);
        const double dg_dr = dk_dr * (dg1v_dk * g1l + g1v * dg1l_dk);
        dspec_dr = (dd_dr * gg + d * dg_dr) / den;
    }

    // Gradient of D G (n.l) / den with respect to the unnormalized normal.
    const double dd_dnh = -4.0 * a2 * nh * (a2 - 1.0) * detail::kInvPi / (t * t * t);
    const double dg1v_dx = k / (qv * qv);
    const double dg1l_dx = k / (ql * ql);
    const Vec3 grad_g = frame.v * (dg1v_dx * g1l) + frame.l * (g1v * dg1l_dx);
    const double e = nl / den;
    const Vec3 grad_e = frame.l / den - (frame.v * nl + frame.l * nv) * (4.0 * nl / (den * den));
    const Vec3 grad_dge = frame.h * (dd_dnh * gg * e) + grad_g * (d * e) + grad_e * (d * gg);

    const Rgb& radiance = light.radiance();
    for (int c = 0; c < 3; ++c) {
        const double b = s.basecolor[c];
        const double lc = radiance[c];
        const double f0 = detail::f0_channel(b, m);
        const double f = detail::fresnel_channel(f0, w);
        const double diffuse = (1.0 - f) * b * detail::kInvPi * (1.0 - m);

        const double df_db = (1.0 - w) * m;
        const double ddiff_db = ((1.0 - f) * (1.0 - m) - df_db * b * (1.0 - m)) * detail::kInvPi;
        out.jacobian.d_basecolor[c][c] = (ddiff_db + df_db * spec) * nl * lc;

        const double df_dm = (1.0 - w) * (b - kDielectricF0);
        const double ddiff_dm = (-df_dm * b * (1.0 - m) - (1.0 - f) * b) * detail::kInvPi;
        out.jacobian.d_metalness[c] = (ddiff_dm + df_dm * spec) * nl * lc;

        out.jacobian.d_roughness[c] = f * dspec_dr * nl * lc;

        const Vec3 raw = (frame.l * diffuse + grad_dge * f) * lc;
        const double along = dot(raw, s.normal);
        for (int j = 0; j < 3; ++j) {
            out.jacobian.d_normal[c][j] = raw[j] - along * s.normal[j];
        }
    }
    return out;
}

}  // namespace chordkit

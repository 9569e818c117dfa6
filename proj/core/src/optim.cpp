#include "chordkit/optim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include "chordkit/brdf.hpp"
#include "chordkit/height.hpp"
#include "chordkit/parallel.hpp"
#include "chordkit/render.hpp"
#include "shading_kernel.hpp"

namespace chordkit {

namespace {

// Largest tangent offset, so that nz >= kMinNormalZ.
const double kMaxTangentRadius = std::sqrt(1.0 - kMinNormalZ * kMinNormalZ);

struct PixelParams {
    Rgb basecolor;
    double nx = 0.0;
    double ny = 0.0;
    double roughness = 0.5;
    double metalness = 0.0;

    Vec3 normal() const {
        return {nx, ny, std::sqrt(std::max(1.0 - nx * nx - ny * ny, 0.0))};
    }
    BrdfSample sample() const { return {basecolor, normal(), roughness, metalness}; }
};

struct PixelGradient {
    Rgb basecolor;
    double nx = 0.0;
    double ny = 0.0;
    double roughness = 0.0;
    double metalness = 0.0;
};

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double abs_error(const Rgb& c, const Rgb& target) {
    return std::abs(c.x - target.x) + std::abs(c.y - target.y) + std::abs(c.z - target.z);
}

PixelParams project(PixelParams p) {
    for (int c = 0; c < 3; ++c) {
        p.basecolor[c] = std::clamp(p.basecolor[c], 0.0, 1.0);
    }
    p.roughness = std::clamp(p.roughness, 0.0, 1.0);
    p.metalness = std::clamp(p.metalness, 0.0, 1.0);
    const double radius = std::hypot(p.nx, p.ny);
    if (radius > kMaxTangentRadius) {
        p.nx *= kMaxTangentRadius / radius;
        p.ny *= kMaxTangentRadius / radius;
    }
    return p;
}

PixelParams step(const PixelParams& p, const PixelGradient& g, double eta, const OptimMask& mask) {
    PixelParams t = p;
    if (mask.basecolor) {
        t.basecolor = p.basecolor - g.basecolor * eta;
    }
    if (mask.normal) {
        t.nx = p.nx - eta * g.nx;
        t.ny = p.ny - eta * g.ny;
    }
    if (mask.roughness) {
        t.roughness = p.roughness - eta * g.roughness;
    }
    if (mask.metalness) {
        t.metalness = p.metalness - eta * g.metalness;
    }
    return project(t);
}

void require_finite(double v, std::size_t pixel, int width, const char* param) {
    if (!std::isfinite(v)) {
        throw NonFiniteGradient("non-finite gradient at pixel (" +
                                std::to_string(pixel % width) + ", " +
                                std::to_string(pixel / width) + ") for parameter " + param);
    }
}

#ifndef NDEBUG
void check_params(const std::vector<PixelParams>& params) {
    for (const auto& p : params) {
        for (int c = 0; c < 3; ++c) {
            assert(p.basecolor[c] >= 0.0 && p.basecolor[c] <= 1.0);
        }
        assert(p.roughness >= 0.0 && p.roughness <= 1.0);
        assert(p.metalness >= 0.0 && p.metalness <= 1.0);
        assert(std::abs(length(p.normal()) - 1.0) < kNormalUnitTolerance);
        assert(p.normal().z >= kMinNormalZ - 1e-12);
    }
}
#endif

}  // namespace

double render_error(const MaterialSet& mat, const TextureImage& rgb, const DirectionalLight& light) {
    require_same_resolution(mat.basecolor(), rgb, "render_error");
    const TextureImage r = render(mat, light);
    const auto a = r.data();
    const auto b = rgb.data();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::abs(a[i] - b[i]);
    }
    return s / static_cast<double>(a.size());
}

OptimResult optimize_material(const TextureImage& rgb, const DirectionalLight& light,
                              const MaterialSet& init, const OptimConfig& config) {
    config.validate();
    if (rgb.channels() != 3 || rgb.space() != ColorSpace::Linear) {
        throw ValidationError("optimize_material expects a linear 3-channel image");
    }
    require_same_resolution(init.basecolor(), rgb, "optimize_material");

    const int w = rgb.width();
    const int h = rgb.height();
    const std::size_t n = rgb.pixel_count();
    const auto target_data = rgb.data();
    const ViewConfig view = ViewConfig::top_down();

    std::vector<PixelParams> params(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int x = static_cast<int>(i % w);
        const int y = static_cast<int>(i / w);
        const BrdfSample s = sample_at(init, x, y);
        PixelParams p;
        p.basecolor = s.basecolor;
        p.nx = s.normal.x;
        p.ny = s.normal.y;
        p.roughness = s.roughness;
        p.metalness = s.metalness;
        // Only re-project when the initial normal sits below the nz floor, so
        // a valid init is reproduced exactly.
        if (std::hypot(p.nx, p.ny) > kMaxTangentRadius) {
            p = project(p);
        }
        params[i] = p;
    }

    auto target_at = [&](std::size_t i) {
        return Rgb{target_data[3 * i], target_data[3 * i + 1], target_data[3 * i + 2]};
    };

    std::vector<double> pixel_error(n);
    parallel_for(n, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            pixel_error[i] = abs_error(shade_pixel(params[i].sample(), light, view), target_at(i));
        }
    });
    auto objective = [&] {
        double s = 0.0;
        for (double e : pixel_error) {
            s += e;
        }
        return s / (3.0 * static_cast<double>(n));
    };

    OptimResult result{init, {objective()}};
    std::vector<double> step_size(n, config.step_size);
    const double min_scale = std::ldexp(1.0, -config.max_halvings);

    for (int it = 0; it < config.iterations; ++it) {
        std::vector<char> moved(n, 0);
        parallel_for(n, [&](std::size_t i0, std::size_t i1) {
            for (std::size_t i = i0; i < i1; ++i) {
                const PixelParams& p = params[i];
                const Rgb target = target_at(i);
                const ShadeResult sr = shade_pixel_with_jacobian(p.sample(), light, view);
                const double err0 = abs_error(sr.color, target);
                if (err0 == 0.0) {
                    continue;
                }
                const Rgb sgn{sign(sr.color.x - target.x), sign(sr.color.y - target.y),
                              sign(sr.color.z - target.z)};
                const auto& jac = sr.jacobian;

                PixelGradient g;
                Vec3 g_normal;
                for (int c = 0; c < 3; ++c) {
                    for (int k = 0; k < 3; ++k) {
                        g.basecolor[k] += sgn[c] * jac.d_basecolor[c][k];
                        g_normal[k] += sgn[c] * jac.d_normal[c][k];
                    }
                    g.roughness += sgn[c] * jac.d_roughness[c];
                    g.metalness += sgn[c] * jac.d_metalness[c];
                }
                const Vec3 nrm = p.normal();
                const double nz = std::max(nrm.z, kMinNormalZ);
                g.nx = g_normal.x - g_normal.z * nrm.x / nz;
                g.ny = g_normal.y - g_normal.z * nrm.y / nz;

                require_finite(g.basecolor.x, i, w, "basecolor.r");
                require_finite(g.basecolor.y, i, w, "basecolor.g");
                require_finite(g.basecolor.z, i, w, "basecolor.b");
                require_finite(g.nx, i, w, "normal.x");
                require_finite(g.ny, i, w, "normal.y");
                require_finite(g.roughness, i, w, "roughness");
                require_finite(g.metalness, i, w, "metalness");

                double eta = step_size[i];
                bool accepted = false;
                for (int halving = 0; halving <= config.max_halvings; ++halving) {
                    const PixelParams trial = step(p, g, eta, config.optimize);
                    const double err1 = abs_error(shade_pixel(trial.sample(), light, view), target);
                    if (err1 <= err0) {
                        params[i] = trial;
                        pixel_error[i] = err1;
                        step_size[i] = std::min(2.0 * eta, config.step_size);
                        moved[i] = 1;
                        accepted = true;
                        break;
                    }
                    eta *= 0.5;
                }
                if (!accepted) {
                    step_size[i] = std::max(eta, config.step_size * min_scale);
                }
            }
        });
#ifndef NDEBUG
        check_params(params);
#endif
        result.objective.push_back(objective());
        if (std::ranges::none_of(moved, [](char m) { return m != 0; })) {
            break;
        }
    }

    std::vector<double> b(n * 3), nd(n * 3), r(n), m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 nn = params[i].normal();
        for (int c = 0; c < 3; ++c) {
            b[3 * i + c] = params[i].basecolor[c];
            nd[3 * i + c] = nn[c];
        }
        r[i] = params[i].roughness;
        m[i] = params[i].metalness;
    }
    TextureImage normal(w, h, 3, std::move(nd));
    TextureImage height = integrate_normals(normal, config.height_scale);
    result.material = MaterialSet(TextureImage(w, h, 3, std::move(b)), std::move(normal),
                                  std::move(height), TextureImage(w, h, 1, std::move(r)),
                                  TextureImage(w, h, 1, std::move(m)));
    return result;
}

MaterialSet lambertian_initialization(const TextureImage& rgb, const DirectionalLight& light) {
    const auto frame = detail::light_frame(light.direction(), ViewConfig::top_down().view_direction);
    const double kd = 1.0 - detail::fresnel_channel(kDielectricF0, frame.fresnel_weight);
    const double cos_theta = light.direction().z;
    std::vector<double> b(rgb.data().begin(), rgb.data().end());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double radiance = light.radiance()[static_cast<int>(i % 3)];
        const double denom = cos_theta * radiance * kd * detail::kInvPi;
        b[i] = denom > 0.0 ? std::clamp(b[i] / denom, 0.0, 1.0) : 0.5;
    }
    const int w = rgb.width();
    const int h = rgb.height();
    return MaterialSet::without_height(TextureImage(w, h, 3, std::move(b)), flat_normal_map(w, h),
                                       TextureImage::filled(w, h, 1, 0.5),
                                       TextureImage::filled(w, h, 1, 0.0));
}

PredictorSuite optimization_predictors(const DirectionalLight& light, const OptimConfig& config) {
    config.validate();
    struct Cache {
        std::optional<TextureImage> input;
        std::optional<MaterialSet> material;
    };
    auto cache = std::make_shared<Cache>();
    auto full_solve = [cache, light, config](const TextureImage& rgb) -> const MaterialSet& {
        if (!cache->input || !(*cache->input == rgb)) {
            cache->material = optimize_material(rgb, light, lambertian_initialization(rgb, light),
                                                config)
                                  .material;
            cache->input = rgb;
        }
        return *cache->material;
    };

    PredictorSuite suite;
    suite.basecolor = [full_solve](const TextureImage& rgb) {
        return full_solve(rgb).basecolor();
    };
    suite.normal = [full_solve](const TextureImage& rgb, const TextureImage&) {
        return full_solve(rgb).normal();
    };
    suite.roughness_metalness = [full_solve, light, config](const TextureImage& rgb,
                                                           const RmMaps& rm) {
        const MaterialSet& solved = full_solve(rgb);
        MaterialSet init = MaterialSet::without_height(solved.basecolor(), solved.normal(),
                                                       rm.roughness, rm.metalness);
        OptimConfig rm_config = config;
        rm_config.optimize = OptimMask{false, false, true, true};
        MaterialSet refined = optimize_material(rgb, light, init, rm_config).material;
        return RmPrediction{refined.roughness(), refined.metalness()};
    };
    return suite;
}

}  // namespace chordkit

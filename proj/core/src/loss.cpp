#include "chordkit/loss.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "chordkit/error.hpp"
#include "chordkit/render.hpp"

namespace chordkit {

namespace {

double sum_abs_diff(const TextureImage& a, const TextureImage& b) {
    const auto da = a.data();
    const auto db = b.data();
    double s = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        s += std::abs(da[i] - db[i]);
    }
    return s;
}

void require_matching(const MaterialSet& pred, const MaterialSet& gt, const char* what) {
    require_same_resolution(pred.basecolor(), gt.basecolor(), what);
}

}  // namespace

double pixel_l1_loss(const MaterialSet& pred, const MaterialSet& gt) {
    require_matching(pred, gt, "pixel_l1_loss");
    const double n = static_cast<double>(gt.basecolor().pixel_count());
    const double s = sum_abs_diff(pred.basecolor(), gt.basecolor()) +
                     sum_abs_diff(pred.roughness(), gt.roughness()) +
                     sum_abs_diff(pred.metalness(), gt.metalness());
    return s / (5.0 * n);
}

double normal_cosine_loss(const TextureImage& pred_normal, const TextureImage& gt_normal) {
    require_same_resolution(pred_normal, gt_normal, "normal_cosine_loss");
    const auto a = pred_normal.data();
    const auto b = gt_normal.data();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); i += 3) {
        s += 1.0 - (a[i] * b[i] + a[i + 1] * b[i + 1] + a[i + 2] * b[i + 2]);
    }
    return s / static_cast<double>(pred_normal.pixel_count());
}

DirectionalLight sample_random_light(Rng& rng, const LightSamplingRange& range) {
    const double az = rng.uniform(0.0, 360.0);
    const double el = rng.uniform(range.min_elevation_deg, range.max_elevation_deg);
    return DirectionalLight::from_angles(az, el, Rgb(std::numbers::pi));
}

double render_l1_loss(const MaterialSet& pred, const MaterialSet& gt,
                      std::span<const DirectionalLight> lights) {
    require_matching(pred, gt, "render_l1_loss");
    if (lights.empty()) {
        throw ValidationError("render_l1_loss needs at least one light");
    }
    double total = 0.0;
    const double samples = static_cast<double>(gt.basecolor().pixel_count()) * 3.0;
    for (const auto& light : lights) {
        total += sum_abs_diff(render(pred, light), render(gt, light)) / samples;
    }
    return total / static_cast<double>(lights.size());
}

void OptimConfig::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) {
        throw ConfigError("step_size must be positive");
    }
    if (iterations < 0) {
        throw ConfigError("iterations must be nonnegative");
    }
    if (render_light_samples < 1) {
        throw ConfigError("render_light_samples must be at least 1");
    }
    if (max_halvings < 0) {
        throw ConfigError("max_halvings must be nonnegative");
    }
    if (!(light_range.min_elevation_deg > 0.0) || light_range.max_elevation_deg >= 90.0 ||
        light_range.min_elevation_deg > light_range.max_elevation_deg) {
        throw ConfigError("light elevation range must lie in (0, 90)");
    }
    if (!(height_scale > 0.0)) {
        throw ConfigError("height_scale must be positive");
    }
}

LossReport total_loss(const MaterialSet& pred, const MaterialSet& gt, const OptimConfig& config,
                      Rng& rng) {
    config.validate();
    require_matching(pred, gt, "total_loss");
    std::vector<DirectionalLight> lights;
    lights.reserve(config.render_light_samples);
    for (int i = 0; i < config.render_light_samples; ++i) {
        lights.push_back(sample_random_light(rng, config.light_range));
    }

    LossReport r;
    r.pixel_l1 = pixel_l1_loss(pred, gt);
    r.normal_cosine = normal_cosine_loss(pred.normal(), gt.normal());
    r.render_l1 = render_l1_loss(pred, gt, lights);
    r.total = config.weights.pixel * r.pixel_l1 + config.weights.normal * r.normal_cosine +
              config.weights.render * r.render_l1;

    const double n = static_cast<double>(gt.basecolor().pixel_count());
    r.per_channel["basecolor"] = sum_abs_diff(pred.basecolor(), gt.basecolor()) / (3.0 * n);
    r.per_channel["roughness"] = sum_abs_diff(pred.roughness(), gt.roughness()) / n;
    r.per_channel["metalness"] = sum_abs_diff(pred.metalness(), gt.metalness()) / n;
    r.per_channel["normal"] = r.normal_cosine;
    r.per_channel["render"] = r.render_l1;
    return r;
}

}  // namespace chordkit

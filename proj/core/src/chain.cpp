#include "chordkit/chain.hpp"

#include <algorithm>
#include <utility>

#include "chordkit/height.hpp"

namespace chordkit {

std::string_view to_string(ChainStep step) {
    switch (step) {
        case ChainStep::Basecolor: return "basecolor";
        case ChainStep::Irradiance: return "irradiance";
        case ChainStep::Normal: return "normal";
        case ChainStep::LightEstimation: return "light-estimation";
        case ChainStep::GridSearch: return "gridsearch-rm";
        case ChainStep::RoughnessMetalness: return "roughness-metalness";
        case ChainStep::Height: return "height";
    }
    return "unknown";
}

ChainStepError::ChainStepError(ChainStep step, const std::string& message)
    : Error("chain step '" + std::string(to_string(step)) + "' failed: " + message), step_(step) {}

namespace {

template <typename F>
auto run_step(ChainStep step, F&& body) -> decltype(body()) {
    try {
        return std::forward<F>(body)();
    } catch (const ChainStepError&) {
        throw;
    } catch (const std::exception& e) {
        throw ChainStepError(step, e.what());
    }
}

void check_output(const TextureImage& img, const TextureImage& ref, int channels,
                  const char* name) {
    require_same_resolution(img, ref, name);
    if (img.channels() != channels || img.space() != ColorSpace::Linear) {
        throw ValidationError(std::string(name) + " has the wrong channel count or color space");
    }
}

void check_unit_range(const TextureImage& img, const char* name) {
    for (double v : img.data()) {
        if (v < 0.0 || v > 1.0) {
            throw ValidationError(std::string(name) + " sample outside [0,1]");
        }
    }
}

}  // namespace

PredictorSuite passthrough_predictors() {
    PredictorSuite suite;
    suite.basecolor = [](const TextureImage& rgb) {
        std::vector<double> out(rgb.data().begin(), rgb.data().end());
        for (double& v : out) {
            v = std::clamp(v, 0.0, 1.0);
        }
        return TextureImage(rgb.width(), rgb.height(), 3, std::move(out));
    };
    suite.normal = [](const TextureImage& rgb, const TextureImage&) {
        return flat_normal_map(rgb.width(), rgb.height());
    };
    suite.roughness_metalness = [](const TextureImage&, const RmMaps& rm) {
        return RmPrediction{rm.roughness, rm.metalness};
    };
    return suite;
}

ChainResult run_chain(const TextureImage& rgb, const PredictorSuite& predictors,
                      const RmSearchSpace& space, const ChainOptions& options) {
    if (rgb.channels() != 3 || rgb.space() != ColorSpace::Linear) {
        throw ValidationError("run_chain expects a linear 3-channel image");
    }
    if (!predictors.basecolor || !predictors.normal || !predictors.roughness_metalness) {
        throw ValidationError("run_chain: predictor suite is incomplete");
    }

    TextureImage basecolor = run_step(ChainStep::Basecolor, [&] {
        TextureImage b = predictors.basecolor(rgb);
        check_output(b, rgb, 3, "predicted basecolor");
        check_unit_range(b, "predicted basecolor");
        return b;
    });

    TextureImage irradiance = run_step(ChainStep::Irradiance, [&] {
        return compute_irradiance(rgb, basecolor, options.irradiance);
    });

    TextureImage normal = run_step(ChainStep::Normal, [&] {
        TextureImage n = predictors.normal(rgb, irradiance);
        check_output(n, rgb, 3, "predicted normal");
        validate_normal_map(n);
        return n;
    });

    LightEstimate light = run_step(ChainStep::LightEstimation, [&] {
        return estimate_light(irradiance, normal, options.light_search);
    });

    RmMaps rm = run_step(ChainStep::GridSearch, [&] {
        return grid_search_rm(rgb, basecolor, normal, light.light, space, options.view);
    });

    RmPrediction rm_pred = run_step(ChainStep::RoughnessMetalness, [&] {
        RmPrediction p = predictors.roughness_metalness(rgb, rm);
        check_output(p.roughness, rgb, 1, "predicted roughness");
        check_output(p.metalness, rgb, 1, "predicted metalness");
        check_unit_range(p.roughness, "predicted roughness");
        check_unit_range(p.metalness, "predicted metalness");
        return p;
    });

    TextureImage height = run_step(ChainStep::Height, [&] {
        return integrate_normals(normal, options.height_scale);
    });

    MaterialSet material(std::move(basecolor), std::move(normal), std::move(height),
                         std::move(rm_pred.roughness), std::move(rm_pred.metalness));
    return {std::move(material), ChainState{std::move(irradiance), std::move(rm), light}};
}

}  // namespace chordkit

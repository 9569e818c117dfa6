#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "chordkit/error.hpp"
#include "chordkit/image.hpp"
#include "chordkit/material.hpp"

namespace chordkit {

// Discrete (roughness, metalness) candidates searched per pixel. The
// standard space has roughness (25 + 5i) / 255 for i = 0..40 and binary
// metalness.
class RmSearchSpace {
public:
    RmSearchSpace(std::vector<double> roughness_levels, std::vector<double> metalness_levels);

    static RmSearchSpace standard();

    const std::vector<double>& roughness_levels() const { return roughness_; }
    const std::vector<double>& metalness_levels() const { return metalness_; }
    std::size_t candidate_count() const { return roughness_.size() * metalness_.size(); }

    bool operator==(const RmSearchSpace&) const = default;

private:
    std::vector<double> roughness_;
    std::vector<double> metalness_;
};

// --- Irradiance -----------------------------------------------------------

// Guard for the division by basecolor.
inline constexpr double kIrradianceDivisionEpsilon = 1e-3;
// Upper clamp on irradiance samples; bounds specular blow-up on dark albedo.
inline constexpr double kIrradianceClamp = 8.0;

struct IrradianceOptions {
    // 1 = channel mean after division, 3 = keep per-channel quotients.
    int channels = 1;
};

// I_irr = clamp(I_rgb / max(b, eps), 0, 8), channel-averaged by default.
TextureImage compute_irradiance(const TextureImage& rgb, const TextureImage& basecolor,
                                const IrradianceOptions& options = {});

// --- Light estimation -----------------------------------------------------

struct LightSearchOptions {
    int azimuth_steps = 72;      // over [0, 360)
    int elevation_steps = 16;    // over [min, max], inclusive
    double min_elevation_deg = 15.0;
    double max_elevation_deg = 90.0;
    int refine_divisions = 8;    // local pass at step / refine_divisions
    // Refits that drop samples brighter than the model by more than
    // outlier_threshold robust standard deviations (specular highlights).
    int outlier_passes = 2;
    double outlier_threshold = 3.0;
};

struct LightEstimate {
    // Radiance is set from the fitted scale assuming a dielectric diffuse
    // response: scale * pi / (1 - F(h.v)).
    DirectionalLight light;
    double intensity_scale;
    double residual_mse;
};

// Fits irradiance ~ scale * max(n . l, 0) by least squares over a direction
// grid followed by one local refinement pass, then refits on the samples that
// are not far above the fitted model. Throws Error("no shading
// signal") when the irradiance is identically zero. Among equal residuals the
// higher elevation, then the lower azimuth, wins.
LightEstimate estimate_light(const TextureImage& irradiance, const TextureImage& normal,
                             const LightSearchOptions& options = {});

// --- Roughness / metalness grid search ------------------------------------

struct RmMaps {
    TextureImage roughness;
    TextureImage metalness;
};

// Per-pixel argmin over the search space of || R(b, n, r, m; light) - I_rgb ||^2.
// Ties go to the smallest roughness, then the first metalness level.
RmMaps grid_search_rm(const TextureImage& rgb, const TextureImage& basecolor,
                      const TextureImage& normal, const DirectionalLight& light,
                      const RmSearchSpace& space = RmSearchSpace::standard(),
                      const ViewConfig& view = ViewConfig::top_down());

// --- Chain orchestration --------------------------------------------------

enum class ChainStep {
    Basecolor,
    Irradiance,
    Normal,
    LightEstimation,
    GridSearch,
    RoughnessMetalness,
    Height,
};

std::string_view to_string(ChainStep step);

class ChainStepError : public Error {
public:
    ChainStepError(ChainStep step, const std::string& message);
    ChainStep step() const { return step_; }

private:
    ChainStep step_;
};

struct RmPrediction {
    TextureImage roughness;
    TextureImage metalness;
};

// The three learned steps of the chain. Any callable that honors the
// signatures can be plugged in: the library ships a passthrough suite and an
// optimization-backed reference suite (see optim.hpp).
struct PredictorSuite {
    std::function<TextureImage(const TextureImage& rgb)> basecolor;
    std::function<TextureImage(const TextureImage& rgb, const TextureImage& irradiance)> normal;
    std::function<RmPrediction(const TextureImage& rgb, const RmMaps& rm)> roughness_metalness;
};

// basecolor := clamp(rgb), normal := flat, (r, m) := grid-search maps.
PredictorSuite passthrough_predictors();

struct ChainState {
    TextureImage irradiance;
    RmMaps rm;
    LightEstimate light_estimate;
};

struct ChainOptions {
    IrradianceOptions irradiance;
    LightSearchOptions light_search;
    double height_scale = 1.0;
    ViewConfig view;
};

struct ChainResult {
    MaterialSet material;
    ChainState state;
};

// basecolor -> irradiance -> normal -> light -> grid search -> (r, m) -> height.
// Failures are rethrown as ChainStepError naming the step.
ChainResult run_chain(const TextureImage& rgb, const PredictorSuite& predictors,
                      const RmSearchSpace& space = RmSearchSpace::standard(),
                      const ChainOptions& options = {});

}  // namespace chordkit

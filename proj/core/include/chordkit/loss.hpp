#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "chordkit/material.hpp"
#include "chordkit/random.hpp"

namespace chordkit {

struct LossWeights {
    double pixel = 1.0;
    double normal = 1.0;
    double render = 1.0;
    // Weight reserved for VGG perceptual terms. No perceptual term is
    // computed by this library, so it never enters the total.
    double perceptual = 0.005;
};

struct LossReport {
    double pixel_l1 = 0.0;
    double normal_cosine = 0.0;
    double render_l1 = 0.0;
    double total = 0.0;
    // basecolor / roughness / metalness mean absolute errors, normal cosine
    // loss, and render l1.
    std::map<std::string, double> per_channel;
};

// Mean absolute difference over every basecolor, roughness and metalness
// sample (five samples per pixel, so basecolor carries 3/5 of the weight).
// Normal and height are excluded.
double pixel_l1_loss(const MaterialSet& pred, const MaterialSet& gt);

// Mean over pixels of 1 - dot(pred, gt).
double normal_cosine_loss(const TextureImage& pred_normal, const TextureImage& gt_normal);

struct LightSamplingRange {
    double min_elevation_deg = 30.0;
    double max_elevation_deg = 75.0;
};

// Azimuth uniform in [0, 360), elevation uniform in the range, white radiance pi.
DirectionalLight sample_random_light(Rng& rng, const LightSamplingRange& range = {});

// Mean over lights, pixels and channels of |R(pred; l) - R(gt; l)|.
double render_l1_loss(const MaterialSet& pred, const MaterialSet& gt,
                      std::span<const DirectionalLight> lights);

struct OptimMask {
    bool basecolor = true;
    bool normal = true;
    bool roughness = true;
    bool metalness = true;
};

struct OptimConfig {
    double step_size = 0.05;
    int iterations = 200;
    int render_light_samples = 8;
    std::uint64_t rng_seed = 0;
    LossWeights weights;
    LightSamplingRange light_range;
    OptimMask optimize;
    int max_halvings = 8;
    double height_scale = 1.0;

    // Throws ConfigError on step_size <= 0, render_light_samples < 1, ...
    void validate() const;
};

// pixel + normal + render terms; the render term uses
// config.render_light_samples lights drawn from rng.
LossReport total_loss(const MaterialSet& pred, const MaterialSet& gt, const OptimConfig& config,
                      Rng& rng);

}  // namespace chordkit

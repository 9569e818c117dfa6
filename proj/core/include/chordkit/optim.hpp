#pragma once

#include <vector>

#include "chordkit/chain.hpp"
#include "chordkit/error.hpp"
#include "chordkit/loss.hpp"
#include "chordkit/material.hpp"

namespace chordkit {

class NonFiniteGradient : public Error {
public:
    using Error::Error;
};

struct OptimResult {
    MaterialSet material;
    // Mean absolute render error, one entry per iteration plus the initial
    // value. Never increases.
    std::vector<double> objective;
};

// Projected (sub)gradient descent on basecolor, normal, roughness and
// metalness minimizing mean |R(mat; light) - rgb|. Normals are parameterized
// by their tangent offset (nx, ny) with nz = sqrt(1 - nx^2 - ny^2) >= 0.05.
// Every pixel backtracks independently: the step is halved (up to
// config.max_halvings times) until that pixel's error does not grow, and
// the pixel is left untouched otherwise. Height is integrated from the final
// normals.
OptimResult optimize_material(const TextureImage& rgb, const DirectionalLight& light,
                              const MaterialSet& init, const OptimConfig& config);

inline MaterialSet estimate_by_optimization(const TextureImage& rgb, const DirectionalLight& light,
                                            const MaterialSet& init, const OptimConfig& config) {
    return optimize_material(rgb, light, init, config).material;
}

// Mean |R(mat; light) - rgb| over pixels and channels.
double render_error(const MaterialSet& mat, const TextureImage& rgb, const DirectionalLight& light);

// Starting point used by the optimization predictors: basecolor inverted from
// a flat Lambertian model, flat normals, roughness 0.5, metalness 0.
MaterialSet lambertian_initialization(const TextureImage& rgb, const DirectionalLight& light);

// Reference predictor suite backed by optimize_material under a known light.
// The basecolor and normal steps share one full optimization; the
// roughness/metalness step refines r and m starting from the grid-search maps.
PredictorSuite optimization_predictors(const DirectionalLight& light, const OptimConfig& config);

}  // namespace chordkit

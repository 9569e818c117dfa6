#pragma once

#include "chordkit/image.hpp"
#include "chordkit/material.hpp"

namespace chordkit {

// Renders every pixel of the material under one directional light. The
// output is a linear 3ch image; height does not take part in shading.
TextureImage render(const MaterialSet& mat, const DirectionalLight& light,
                    const ViewConfig& view = ViewConfig::top_down());

}  // namespace chordkit

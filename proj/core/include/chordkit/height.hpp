#pragma once

#include "chordkit/image.hpp"

namespace chordkit {

// Surface slopes p = dh/dx (x to the right) and q = dh/dy (y up, i.e. toward
// row 0), in height units per world unit.
class GradientField {
public:
    GradientField(TextureImage p, TextureImage q, double pixel_scale = 1.0);

    const TextureImage& p() const { return p_; }
    const TextureImage& q() const { return q_; }
    // World units per pixel.
    double pixel_scale() const { return pixel_scale_; }

private:
    TextureImage p_;
    TextureImage q_;
    double pixel_scale_;
};

// Smallest normal z used when converting to slopes.
inline constexpr double kMinNormalZ = 0.05;

// p = -nx/nz * height_scale, q = -ny/nz * height_scale, nz floored at kMinNormalZ.
GradientField normals_to_gradients(const TextureImage& normal, double height_scale = 1.0);

// Periodic least-squares integration in the Fourier domain, using the
// frequency response of the central-difference stencil. The returned height
// is mean-zero.
TextureImage integrate_gradients(const GradientField& g);

// Central differences with periodic wrap; n = normalize(-dh/dx, -dh/dy, height_scale),
// the exact inverse of normals_to_gradients up to the stencil.
TextureImage height_to_normals(const TextureImage& height, double height_scale = 1.0);

// Convenience: normals_to_gradients followed by integrate_gradients.
TextureImage integrate_normals(const TextureImage& normal, double height_scale = 1.0);

}  // namespace chordkit

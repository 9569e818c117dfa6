#pragma once

#include <filesystem>

#include "chordkit/image.hpp"

namespace chordkit {

enum class PngDepth { Eight = 8, Sixteen = 16 };

// Reads 8/16-bit gray, gray+alpha, RGB, RGBA or palette PNGs; alpha is
// dropped, samples are scaled to [0,1] and tagged with `space`.
TextureImage read_png(const std::filesystem::path& path, ColorSpace space);

// Writes samples clamped to [0,1] and rounded to the bit depth. The color
// space tag is not transformed: convert first if the file should hold sRGB.
void write_png(const std::filesystem::path& path, const TextureImage& img,
               PngDepth depth = PngDepth::Sixteen);

// Half-float EXR; 1ch images use the Y channel, 3ch images R, G, B.
void write_exr(const std::filesystem::path& path, const TextureImage& img);
TextureImage read_exr(const std::filesystem::path& path);

// .exr files load as linear data; .png files are treated as sRGB and
// decoded to linear.
TextureImage read_linear_image(const std::filesystem::path& path);

// Preview: clamp, sRGB encode, 16-bit PNG.
void write_preview_png(const std::filesystem::path& path, const TextureImage& linear);

}  // namespace chordkit

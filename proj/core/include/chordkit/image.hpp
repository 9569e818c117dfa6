#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace chordkit {

enum class ColorSpace { Linear, SRGB };

std::string_view to_string(ColorSpace space);

// H x W image with 1 or 3 interleaved channels stored row-major. Instances
// are immutable; every constructor checks the size, finiteness and (for
// sRGB-tagged data) the [0,1] range.
class TextureImage {
public:
    TextureImage(int width, int height, int channels, std::vector<double> data,
                 ColorSpace space = ColorSpace::Linear);

    // Constant-valued image.
    static TextureImage filled(int width, int height, int channels, double value,
                               ColorSpace space = ColorSpace::Linear);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    ColorSpace space() const { return space_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    std::span<const double> data() const { return data_; }

    double at(int x, int y, int c = 0) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    // Index into data() for the first channel of a pixel.
    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_;
    }

    bool same_resolution(const TextureImage& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    // Single channel c extracted as a 1ch image.
    TextureImage channel(int c) const;

    double mean() const;

    bool operator==(const TextureImage& other) const = default;

private:
    int width_;
    int height_;
    int channels_;
    ColorSpace space_;
    std::vector<double> data_;
};

// Throws ResolutionMismatch naming `what` when the two images differ in size.
void require_same_resolution(const TextureImage& a, const TextureImage& b, std::string_view what);

// IEC 61966-2-1 transfer functions on a single sample.
double srgb_decode(double encoded);
double srgb_encode(double linear);

// Per-sample sRGB decode; input must be tagged SRGB.
TextureImage srgb_to_linear(const TextureImage& img);
// Clamps to [0,1] then encodes; input must be tagged Linear.
TextureImage linear_to_srgb(const TextureImage& img);

}  // namespace chordkit

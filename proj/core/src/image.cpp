#include "chordkit/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chordkit/error.hpp"

namespace chordkit {

std::string_view to_string(ColorSpace space) {
    return space == ColorSpace::Linear ? "linear" : "srgb";
}

TextureImage::TextureImage(int width, int height, int channels, std::vector<double> data,
                           ColorSpace space)
    : width_(width), height_(height), channels_(channels), space_(space), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("image dimensions must be positive");
    }
    if (channels != 1 && channels != 3) {
        throw ValidationError("image must have 1 or 3 channels");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
        throw ValidationError("image data length does not match width * height * channels");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        const double v = data_[i];
        if (!std::isfinite(v)) {
            throw ValidationError("image contains a non-finite sample at index " + std::to_string(i));
        }
        if (space_ == ColorSpace::SRGB && (v < 0.0 || v > 1.0)) {
            throw ValidationError("sRGB-tagged image sample outside [0,1] at index " +
                                  std::to_string(i));
        }
    }
}

TextureImage TextureImage::filled(int width, int height, int channels, double value,
                                  ColorSpace space) {
    std::vector<double> data(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) *
                                 std::max(channels, 0),
                             value);
    return TextureImage(width, height, channels, std::move(data), space);
}

TextureImage TextureImage::channel(int c) const {
    if (c < 0 || c >= channels_) {
        throw ValidationError("channel index out of range");
    }
    std::vector<double> out(pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = data_[i * channels_ + c];
    }
    return TextureImage(width_, height_, 1, std::move(out), space_);
}

double TextureImage::mean() const {
    return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

void require_same_resolution(const TextureImage& a, const TextureImage& b, std::string_view what) {
    if (!a.same_resolution(b)) {
        throw ResolutionMismatch(std::string(what) + ": resolution mismatch (" +
                                 std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                 " vs " + std::to_string(b.width()) + "x" +
                                 std::to_string(b.height()) + ")");
    }
}

double srgb_decode(double encoded) {
    if (encoded <= 0.04045) {
        return encoded / 12.92;
    }
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

double srgb_encode(double linear) {
    if (linear <= 0.0031308) {
        return linear * 12.92;
    }
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

TextureImage srgb_to_linear(const TextureImage& img) {
    if (img.space() != ColorSpace::SRGB) {
        throw ValidationError("srgb_to_linear: image is already linear");
    }
    std::vector<double> out(img.data().begin(), img.data().end());
    std::ranges::transform(out, out.begin(), srgb_decode);
    return TextureImage(img.width(), img.height(), img.channels(), std::move(out),
                        ColorSpace::Linear);
}

TextureImage linear_to_srgb(const TextureImage& img) {
    if (img.space() != ColorSpace::Linear) {
        throw ValidationError("linear_to_srgb: image is already sRGB");
    }
    std::vector<double> out(img.data().begin(), img.data().end());
    // Encoding can overshoot 1.0 by an ulp; the clamp after keeps the SRGB
    // range invariant.
    std::ranges::transform(out, out.begin(), [](double v) {
        return std::clamp(srgb_encode(std::clamp(v, 0.0, 1.0)), 0.0, 1.0);
    });
    return TextureImage(img.width(), img.height(), img.channels(), std::move(out),
                        ColorSpace::SRGB);
}

}  // namespace chordkit

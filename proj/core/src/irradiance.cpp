#include <algorithm>

#include "chordkit/chain.hpp"
#include "chordkit/parallel.hpp"

namespace chordkit {

TextureImage compute_irradiance(const TextureImage& rgb, const TextureImage& basecolor,
                                const IrradianceOptions& options) {
    require_same_resolution(rgb, basecolor, "compute_irradiance");
    if (rgb.channels() != 3 || basecolor.channels() != 3) {
        throw ValidationError("compute_irradiance expects 3-channel rgb and basecolor");
    }
    if (rgb.space() != ColorSpace::Linear || basecolor.space() != ColorSpace::Linear) {
        throw ValidationError("compute_irradiance expects linear inputs");
    }
    if (options.channels != 1 && options.channels != 3) {
        throw ValidationError("irradiance channel count must be 1 or 3");
    }
    const auto in = rgb.data();
    const auto b = basecolor.data();
    const std::size_t n = rgb.pixel_count();
    const int out_ch = options.channels;
    std::vector<double> out(n * out_ch);

    parallel_for(n, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            double q[3];
            for (int c = 0; c < 3; ++c) {
                q[c] = in[3 * i + c] / std::max(b[3 * i + c], kIrradianceDivisionEpsilon);
            }
            if (out_ch == 1) {
                out[i] = std::clamp((q[0] + q[1] + q[2]) / 3.0, 0.0, kIrradianceClamp);
            } else {
                for (int c = 0; c < 3; ++c) {
                    out[3 * i + c] = std::clamp(q[c], 0.0, kIrradianceClamp);
                }
            }
        }
    });
    return TextureImage(rgb.width(), rgb.height(), out_ch, std::move(out));
}

}  // namespace chordkit

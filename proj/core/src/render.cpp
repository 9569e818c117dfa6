#include "chordkit/render.hpp"

#include "chordkit/parallel.hpp"
#include "shading_kernel.hpp"

namespace chordkit {

TextureImage render(const MaterialSet& mat, const DirectionalLight& light, const ViewConfig& view) {
    const int w = mat.width();
    const int h = mat.height_px();
    const auto frame = detail::light_frame(light.direction(), view.view_direction);
    const auto base = mat.basecolor().data();
    const auto normal = mat.normal().data();
    const auto rough = mat.roughness().data();
    const auto metal = mat.metalness().data();
    std::vector<double> out(static_cast<std::size_t>(w) * h * 3, 0.0);

    parallel_for(static_cast<std::size_t>(h), [&](std::size_t y0, std::size_t y1) {
        for (std::size_t y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t p = y * w + x;
                const Vec3 n{normal[3 * p], normal[3 * p + 1], normal[3 * p + 2]};
                const auto g = detail::geometry(n, frame);
                if (!g.lit) {
                    continue;
                }
                const double spec =
                    detail::specular_scale(g, detail::effective_roughness(rough[p]));
                const Rgb c = detail::shade(g, spec, {base[3 * p], base[3 * p + 1], base[3 * p + 2]},
                                            metal[p], light.radiance());
                out[3 * p] = c.x;
                out[3 * p + 1] = c.y;
                out[3 * p + 2] = c.z;
            }
        }
    });
    return TextureImage(w, h, 3, std::move(out));
}

}  // namespace chordkit

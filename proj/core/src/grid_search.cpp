#include <limits>

#include "chordkit/chain.hpp"
#include "chordkit/parallel.hpp"
#include "shading_kernel.hpp"

namespace chordkit {

RmSearchSpace::RmSearchSpace(std::vector<double> roughness_levels,
                             std::vector<double> metalness_levels)
    : roughness_(std::move(roughness_levels)), metalness_(std::move(metalness_levels)) {
    if (roughness_.empty() || metalness_.empty()) {
        throw ValidationError("search space levels must be non-empty");
    }
    for (std::size_t i = 0; i < roughness_.size(); ++i) {
        if (!(roughness_[i] >= 0.0 && roughness_[i] <= 1.0)) {
            throw ValidationError("roughness levels must lie in [0,1]");
        }
        if (i > 0 && !(roughness_[i] > roughness_[i - 1])) {
            throw ValidationError("roughness levels must be strictly ascending");
        }
    }
    for (std::size_t i = 0; i < metalness_.size(); ++i) {
        if (!(metalness_[i] >= 0.0 && metalness_[i] <= 1.0)) {
            throw ValidationError("metalness levels must lie in [0,1]");
        }
        if (i > 0 && !(metalness_[i] > metalness_[i - 1])) {
            throw ValidationError("metalness levels must be strictly ascending");
        }
    }
}

RmSearchSpace RmSearchSpace::standard() {
    std::vector<double> r;
    r.reserve(41);
    for (int i = 0; i <= 40; ++i) {
        r.push_back((25.0 + 5.0 * i) / 255.0);
    }
    return {std::move(r), {0.0, 1.0}};
}

RmMaps grid_search_rm(const TextureImage& rgb, const TextureImage& basecolor,
                      const TextureImage& normal, const DirectionalLight& light,
                      const RmSearchSpace& space, const ViewConfig& view) {
    require_same_resolution(rgb, basecolor, "grid_search_rm basecolor");
    require_same_resolution(rgb, normal, "grid_search_rm normal");
    if (rgb.channels() != 3 || basecolor.channels() != 3 || normal.channels() != 3) {
        throw ValidationError("grid_search_rm expects 3-channel rgb, basecolor and normal");
    }
    const std::size_t n = rgb.pixel_count();
    const auto in = rgb.data();
    const auto base = basecolor.data();
    const auto nd = normal.data();
    const auto& rough = space.roughness_levels();
    const auto& metal = space.metalness_levels();
    const auto frame = detail::light_frame(light.direction(), view.view_direction);
    const Rgb radiance = light.radiance();

    std::vector<double> r_eff(rough.size());
    for (std::size_t k = 0; k < rough.size(); ++k) {
        r_eff[k] = detail::effective_roughness(rough[k]);
    }

    std::vector<double> r_out(n);
    std::vector<double> m_out(n);
    parallel_for(n, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            const Vec3 nrm{nd[3 * i], nd[3 * i + 1], nd[3 * i + 2]};
            const Rgb b{base[3 * i], base[3 * i + 1], base[3 * i + 2]};
            const Rgb target{in[3 * i], in[3 * i + 1], in[3 * i + 2]};
            // Geometry is shared by every candidate, the lobe factor by every
            // metalness level of one roughness.
            const auto g = detail::geometry(nrm, frame);
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_r = 0;
            std::size_t best_m = 0;
            for (std::size_t kr = 0; kr < rough.size(); ++kr) {
                const double spec = g.lit ? detail::specular_scale(g, r_eff[kr]) : 0.0;
                for (std::size_t km = 0; km < metal.size(); ++km) {
                    const Rgb c = detail::shade(g, spec, b, metal[km], radiance);
                    const double dx = c.x - target.x;
                    const double dy = c.y - target.y;
                    const double dz = c.z - target.z;
                    const double mse = dx * dx + dy * dy + dz * dz;
                    if (mse < best) {
                        best = mse;
                        best_r = kr;
                        best_m = km;
                    }
                }
            }
            r_out[i] = rough[best_r];
            m_out[i] = metal[best_m];
        }
    });
    return {TextureImage(rgb.width(), rgb.height(), 1, std::move(r_out)),
            TextureImage(rgb.width(), rgb.height(), 1, std::move(m_out))};
}

}  // namespace chordkit

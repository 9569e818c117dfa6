#pragma once

// Generators and reference implementations shared by the unit and acceptance
// tests. The reference code is deliberately naive and written from the
// formulas, without going through the library's shading kernel.

#include <chordkit/chordkit.hpp>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace chordkit::testing {

inline constexpr double kPi = std::numbers::pi;

// --- property runner -----------------------------------------------------

// Runs `property(rng, case_index)` for `cases` independently seeded cases and
// returns the first failing seed, or 0 when all pass. Each case reseeds so a
// failure reproduces from its seed alone.
template <class Property>
std::uint64_t for_all(std::uint64_t base_seed, int cases, Property&& property) {
    for (int i = 0; i < cases; ++i) {
        const std::uint64_t seed = base_seed * 1000003u + static_cast<std::uint64_t>(i) + 1;
        Rng rng(seed);
        if (!property(rng)) {
            return seed;
        }
    }
    return 0;
}

// --- generators ----------------------------------------------------------

// Uniform direction in the upper hemisphere with z >= min_z.
inline Vec3 random_normal(Rng& rng, double min_z = 0.2) {
    for (;;) {
        const Vec3 v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.0, 1.0)};
        const double len = length(v);
        if (len < 1e-3 || len > 1.0) {
            continue;
        }
        const Vec3 n = v / len;
        if (n.z >= min_z) {
            return n;
        }
    }
}

inline Rgb random_rgb(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

inline DirectionalLight random_light(Rng& rng, double min_el = 20.0, double max_el = 80.0,
                                     double radiance = kPi) {
    return DirectionalLight::from_angles(rng.uniform(0.0, 360.0), rng.uniform(min_el, max_el),
                                         Rgb{radiance});
}

inline TextureImage random_image(Rng& rng, int w, int h, int c, double lo = 0.0, double hi = 1.0) {
    std::vector<double> d(static_cast<std::size_t>(w) * h * c);
    for (double& v : d) {
        v = rng.uniform(lo, hi);
    }
    return TextureImage(w, h, c, std::move(d));
}

inline TextureImage random_normal_map(Rng& rng, int w, int h, double min_z = 0.5) {
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(w) * h * 3);
    for (int i = 0; i < w * h; ++i) {
        const Vec3 n = random_normal(rng, min_z);
        d.insert(d.end(), {n.x, n.y, n.z});
    }
    return TextureImage(w, h, 3, std::move(d));
}

// Random periodic height field built from a few low-frequency sinusoids,
// mean zero by construction.
struct Wave {
    int fx;
    int fy;
    double amplitude;
    double phase;
};

inline std::vector<Wave> random_waves(Rng& rng, int count, int max_freq) {
    std::vector<Wave> waves;
    for (int i = 0; i < count; ++i) {
        int fx = 0;
        int fy = 0;
        while (fx == 0 && fy == 0) {
            fx = static_cast<int>(rng.uniform(-max_freq, max_freq + 1.0));
            fy = static_cast<int>(rng.uniform(0.0, max_freq + 1.0));
        }
        waves.push_back({fx, fy, rng.uniform(0.2, 1.0), rng.uniform(0.0, 2.0 * kPi)});
    }
    return waves;
}

// Height in world units where one pixel spans `pixel_scale`; returns the
// field and its analytic slopes (y up, toward row 0).
struct AnalyticSurface {
    TextureImage height;
    TextureImage p;
    TextureImage q;
};

inline AnalyticSurface wave_surface(const std::vector<Wave>& waves, int size, double amplitude_scale) {
    const std::size_t n = static_cast<std::size_t>(size) * size;
    std::vector<double> h(n, 0.0);
    std::vector<double> p(n, 0.0);
    std::vector<double> q(n, 0.0);
    for (int row = 0; row < size; ++row) {
        const double y = static_cast<double>(size - 1 - row);
        for (int x = 0; x < size; ++x) {
            const std::size_t i = static_cast<std::size_t>(row) * size + x;
            for (const Wave& w : waves) {
                const double kx = 2.0 * kPi * w.fx / size;
                const double ky = 2.0 * kPi * w.fy / size;
                const double arg = kx * x + ky * y + w.phase;
                const double a = w.amplitude * amplitude_scale;
                h[i] += a * std::sin(arg);
                p[i] += a * kx * std::cos(arg);
                q[i] += a * ky * std::cos(arg);
            }
        }
    }
    // Remove the floating-point residue of the analytic zero mean.
    double mean = 0.0;
    for (double v : h) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    for (double& v : h) {
        v -= mean;
    }
    return {TextureImage(size, size, 1, std::move(h)), TextureImage(size, size, 1, std::move(p)),
            TextureImage(size, size, 1, std::move(q))};
}

inline TextureImage normals_from_slopes(const TextureImage& p, const TextureImage& q) {
    std::vector<double> d;
    d.reserve(p.pixel_count() * 3);
    for (std::size_t i = 0; i < p.pixel_count(); ++i) {
        const Vec3 n = normalize(Vec3{-p.data()[i], -q.data()[i], 1.0});
        d.insert(d.end(), {n.x, n.y, n.z});
    }
    return TextureImage(p.width(), p.height(), 3, std::move(d));
}

inline MaterialSet random_material(Rng& rng, int w, int h, double base_lo = 0.05, double base_hi = 0.95) {
    return MaterialSet::without_height(random_image(rng, w, h, 3, base_lo, base_hi),
                                       random_normal_map(rng, w, h), random_image(rng, w, h, 1),
                                       random_image(rng, w, h, 1));
}

// --- reference implementations -------------------------------------------

// Scalar Cook-Torrance written straight from the term list.
inline Rgb reference_cook_torrance(const Rgb& b, const Vec3& n, double roughness, double metalness,
                                   const Vec3& l, const Vec3& v, const Rgb& radiance) {
    const double n_l = n.x * l.x + n.y * l.y + n.z * l.z;
    if (n_l <= 0.0) {
        return {0.0, 0.0, 0.0};
    }
    const double hx = l.x + v.x;
    const double hy = l.y + v.y;
    const double hz = l.z + v.z;
    const double hl = std::sqrt(hx * hx + hy * hy + hz * hz);
    const double n_h = std::max(0.0, (n.x * hx + n.y * hy + n.z * hz) / hl);
    const double h_v = std::max(0.0, (hx * v.x + hy * v.y + hz * v.z) / hl);
    const double n_v = std::max(0.0, n.x * v.x + n.y * v.y + n.z * v.z);

    const double r = std::max(roughness, 0.01);
    const double alpha = r * r;
    const double denom = n_h * n_h * (alpha * alpha - 1.0) + 1.0;
    const double D = alpha * alpha / (kPi * denom * denom);
    const double k = (r + 1.0) * (r + 1.0) / 8.0;
    const double G = (n_v / (n_v * (1.0 - k) + k)) * (n_l / (n_l * (1.0 - k) + k));

    Rgb out;
    for (int c = 0; c < 3; ++c) {
        const double f0 = 0.04 * (1.0 - metalness) + b[c] * metalness;
        const double F = f0 + (1.0 - f0) * std::pow(1.0 - h_v, 5.0);
        const double diffuse = (1.0 - F) * b[c] / kPi * (1.0 - metalness);
        const double specular = D * G * F / (4.0 * n_v * n_l + 1e-6);
        out[c] = (diffuse + specular) * n_l * radiance[c];
    }
    return out;
}

// Per-pixel brute force over every candidate using the public single-pixel
// shader.
inline RmMaps naive_grid_search(const TextureImage& rgb, const TextureImage& basecolor,
                                const TextureImage& normal, const DirectionalLight& light,
                                const RmSearchSpace& space) {
    const int w = rgb.width();
    const int h = rgb.height();
    std::vector<double> r_out(rgb.pixel_count());
    std::vector<double> m_out(rgb.pixel_count());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Rgb b{basecolor.at(x, y, 0), basecolor.at(x, y, 1), basecolor.at(x, y, 2)};
            const Vec3 n = normal_at(normal, x, y);
            double best = std::numeric_limits<double>::infinity();
            double best_r = 0.0;
            double best_m = 0.0;
            for (double r : space.roughness_levels()) {
                for (double m : space.metalness_levels()) {
                    const Rgb c = shade_pixel(BrdfSample(b, n, r, m), light, ViewConfig::top_down());
                    double err = 0.0;
                    for (int k = 0; k < 3; ++k) {
                        const double d = c[k] - rgb.at(x, y, k);
                        err += d * d;
                    }
                    if (err < best) {
                        best = err;
                        best_r = r;
                        best_m = m;
                    }
                }
            }
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            r_out[i] = best_r;
            m_out[i] = best_m;
        }
    }
    return {TextureImage(w, h, 1, std::move(r_out)), TextureImage(w, h, 1, std::move(m_out))};
}

// Shading term (n . l)+ * radiance for every pixel.
inline TextureImage lambert_shading(const TextureImage& normal, const DirectionalLight& light) {
    std::vector<double> d(normal.pixel_count());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Vec3 n{normal.data()[3 * i], normal.data()[3 * i + 1], normal.data()[3 * i + 2]};
        d[i] = std::max(0.0, dot(n, light.direction())) * light.radiance().x;
    }
    return TextureImage(normal.width(), normal.height(), 1, std::move(d));
}

// Pure Lambertian render b / pi * (n . l)+ * radiance.
inline TextureImage lambert_render(const TextureImage& basecolor, const TextureImage& normal,
                                   const DirectionalLight& light) {
    const TextureImage s = lambert_shading(normal, light);
    std::vector<double> d(basecolor.data().size());
    for (std::size_t i = 0; i < s.pixel_count(); ++i) {
        for (int c = 0; c < 3; ++c) {
            d[3 * i + c] = basecolor.data()[3 * i + c] / kPi * s.data()[i];
        }
    }
    return TextureImage(basecolor.width(), basecolor.height(), 3, std::move(d));
}

inline double rms(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

inline double rms_diff(const TextureImage& a, const TextureImage& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.data().size()));
}

// Fresh scratch directory under the build tree, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("chordkit_test_" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace chordkit::testing

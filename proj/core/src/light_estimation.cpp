#include <algorithm>
#include <cmath>
#include <numbers>

#include "chordkit/chain.hpp"
#include "chordkit/parallel.hpp"
#include "shading_kernel.hpp"

namespace chordkit {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Candidate {
    double azimuth_deg;
    double elevation_deg;
};

struct Fit {
    double residual = 0.0;  // sum of squares
    double scale = 0.0;
    bool valid = false;
};

Vec3 direction_of(const Candidate& c) {
    const double az = c.azimuth_deg * kDeg;
    const double el = c.elevation_deg * kDeg;
    return normalize(Vec3{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)});
}

// Structure-of-arrays copy of the inputs for the inner fitting loop.
struct Samples {
    std::vector<double> nx, ny, nz, irr;
    double sum_sq = 0.0;
};

Samples gather(const TextureImage& irradiance, const TextureImage& normal) {
    Samples s;
    const std::size_t n = irradiance.pixel_count();
    s.nx.resize(n);
    s.ny.resize(n);
    s.nz.resize(n);
    s.irr.resize(n);
    const auto ird = irradiance.data();
    const auto nd = normal.data();
    const int ch = irradiance.channels();
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (int c = 0; c < ch; ++c) {
            v += ird[i * ch + c];
        }
        v /= ch;
        s.irr[i] = v;
        s.nx[i] = nd[3 * i];
        s.ny[i] = nd[3 * i + 1];
        s.nz[i] = nd[3 * i + 2];
        s.sum_sq += v * v;
    }
    return s;
}

Fit fit(const Samples& s, const Vec3& l) {
    // Four interleaved partial sums, combined in a fixed order.
    double ai[4] = {0, 0, 0, 0};
    double aa[4] = {0, 0, 0, 0};
    const std::size_t n = s.irr.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (int k = 0; k < 4; ++k) {
            const double a = std::max(s.nx[i + k] * l.x + s.ny[i + k] * l.y + s.nz[i + k] * l.z, 0.0);
            ai[k] += a * s.irr[i + k];
            aa[k] += a * a;
        }
    }
    for (; i < n; ++i) {
        const double a = std::max(s.nx[i] * l.x + s.ny[i] * l.y + s.nz[i] * l.z, 0.0);
        ai[0] += a * s.irr[i];
        aa[0] += a * a;
    }
    const double sai = (ai[0] + ai[1]) + (ai[2] + ai[3]);
    const double saa = (aa[0] + aa[1]) + (aa[2] + aa[3]);
    Fit f;
    if (saa > 0.0 && sai > 0.0) {
        f.valid = true;
        f.scale = sai / saa;
        f.residual = std::max(s.sum_sq - sai * sai / saa, 0.0);
    }
    return f;
}

struct Best {
    Candidate candidate;
    Fit fit;
    bool found = false;
};

// Evaluates candidates in parallel; selection runs in list order so the
// outcome does not depend on scheduling.
void select(const Samples& s, const std::vector<Candidate>& candidates, double tolerance,
            Best& best) {
    std::vector<Fit> fits(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
            fits[i] = fit(s, direction_of(candidates[i]));
        }
    });
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!fits[i].valid) {
            continue;
        }
        if (!best.found || fits[i].residual < best.fit.residual - tolerance) {
            best = {candidates[i], fits[i], true};
        }
    }
}

Samples subset(const Samples& s, const std::vector<char>& keep) {
    Samples out;
    for (std::size_t i = 0; i < s.irr.size(); ++i) {
        if (keep[i]) {
            out.nx.push_back(s.nx[i]);
            out.ny.push_back(s.ny[i]);
            out.nz.push_back(s.nz[i]);
            out.irr.push_back(s.irr[i]);
            out.sum_sq += s.irr[i] * s.irr[i];
        }
    }
    return out;
}

double model_residual(const Samples& s, std::size_t i, const Vec3& dir, double scale) {
    const double a = std::max(s.nx[i] * dir.x + s.ny[i] * dir.y + s.nz[i] * dir.z, 0.0);
    return s.irr[i] - scale * a;
}

Best search(const Samples& s, const LightSearchOptions& options) {
    const double tolerance = 1e-12 * s.sum_sq;
    const double az_step = 360.0 / options.azimuth_steps;
    const double el_step = options.elevation_steps > 1
                               ? (options.max_elevation_deg - options.min_elevation_deg) /
                                     (options.elevation_steps - 1)
                               : 0.0;

    // Coarse grid, highest elevation first; the pole is visited once.
    std::vector<Candidate> coarse;
    for (int e = options.elevation_steps - 1; e >= 0; --e) {
        const double el = options.min_elevation_deg + e * el_step;
        if (el >= 90.0) {
            coarse.push_back({0.0, 90.0});
            continue;
        }
        for (int a = 0; a < options.azimuth_steps; ++a) {
            coarse.push_back({a * az_step, el});
        }
    }
    Best best;
    select(s, coarse, tolerance, best);
    if (!best.found) {
        return best;
    }

    // Local refinement around the coarse optimum.
    const int d = options.refine_divisions;
    std::vector<Candidate> fine;
    const Candidate center = best.candidate;
    for (int j = d; j >= -d; --j) {
        const double el = center.elevation_deg + j * el_step / d;
        if (el < options.min_elevation_deg || el > options.max_elevation_deg) {
            continue;
        }
        for (int i = -d; i <= d; ++i) {
            if (i == 0 && j == 0) {
                continue;
            }
            double az = std::fmod(center.azimuth_deg + i * az_step / d + 360.0, 360.0);
            fine.push_back({az, el});
        }
    }
    select(s, fine, tolerance, best);
    return best;
}

}  // namespace

LightEstimate estimate_light(const TextureImage& irradiance, const TextureImage& normal,
                             const LightSearchOptions& options) {
    require_same_resolution(irradiance, normal, "estimate_light");
    validate_normal_map(normal);
    if (options.azimuth_steps < 1 || options.elevation_steps < 1 || options.refine_divisions < 1 ||
        !(options.min_elevation_deg > 0.0) || options.max_elevation_deg > 90.0 ||
        options.min_elevation_deg > options.max_elevation_deg || options.outlier_passes < 0 ||
        !(options.outlier_threshold > 0.0)) {
        throw ValidationError("invalid light search options");
    }

    const Samples all = gather(irradiance, normal);
    if (!(all.sum_sq > 0.0)) {
        throw Error("estimate_light: no shading signal");
    }
    Best best = search(all, options);
    if (!best.found) {
        throw Error("estimate_light: no shading signal");
    }

    // Specular highlights only ever add energy: refit without samples that
    // sit far above the Lambertian prediction.
    const std::size_t n = all.irr.size();
    std::vector<double> abs_res(n);
    std::vector<char> keep(n);
    for (int pass = 0; pass < options.outlier_passes; ++pass) {
        const Vec3 dir = direction_of(best.candidate);
        for (std::size_t i = 0; i < n; ++i) {
            abs_res[i] = std::abs(model_residual(all, i, dir, best.fit.scale));
        }
        std::vector<double> sorted = abs_res;
        std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
        const double cut = options.outlier_threshold * 1.4826 * sorted[n / 2];
        std::size_t kept = 0;
        for (std::size_t i = 0; i < n; ++i) {
            keep[i] = !(model_residual(all, i, dir, best.fit.scale) > cut);
            kept += keep[i];
        }
        if (kept == n || 2 * kept < n) {
            break;
        }
        const Samples inliers = subset(all, keep);
        if (!(inliers.sum_sq > 0.0)) {
            break;
        }
        const Best refit = search(inliers, options);
        if (!refit.found) {
            break;
        }
        best = refit;
    }

    const Vec3 dir = direction_of(best.candidate);

    // Residual over every sample, recomputed so an exact model fit reports zero.
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = model_residual(all, i, dir, best.fit.scale);
        residual += e * e;
    }

    const auto frame = detail::light_frame(dir, ViewConfig::top_down().view_direction);
    const double kd = 1.0 - detail::fresnel_channel(kDielectricF0, frame.fresnel_weight);
    const double radiance = best.fit.scale * std::numbers::pi / kd;
    return {DirectionalLight(dir, Rgb(radiance)), best.fit.scale,
            residual / static_cast<double>(n)};
}

}  // namespace chordkit

#include "chordkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "battery_asset.hpp"
#include "chordkit/error.hpp"
#include "chordkit/render.hpp"

namespace chordkit {

namespace {

TextureImage clamp01(const TextureImage& img) {
    std::vector<double> d(img.data().begin(), img.data().end());
    for (double& v : d) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return TextureImage(img.width(), img.height(), img.channels(), std::move(d));
}

TextureImage encoded_normals(const TextureImage& n) {
    std::vector<double> d(n.data().begin(), n.data().end());
    for (double& v : d) {
        v = (v + 1.0) * 0.5;
    }
    return TextureImage(n.width(), n.height(), 3, std::move(d));
}

// Aligns pred to ref with the least-squares gain/offset, then maps both
// through the min-max normalization of ref.
std::pair<TextureImage, TextureImage> aligned_heights(const TextureImage& pred,
                                                      const TextureImage& ref) {
    const auto p = pred.data();
    const auto r = ref.data();
    const double n = static_cast<double>(p.size());
    double mp = 0.0;
    double mr = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mp += p[i];
        mr += r[i];
    }
    mp /= n;
    mr /= n;
    double cov = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        cov += (p[i] - mp) * (r[i] - mr);
        var += (p[i] - mp) * (p[i] - mp);
    }
    const double gain = var > 0.0 ? cov / var : 0.0;
    const double offset = mr - gain * mp;

    const auto [lo_it, hi_it] = std::ranges::minmax_element(r);
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    auto normalize = [&](double v) { return range > 0.0 ? (v - lo) / range : v; };

    std::vector<double> a(p.size());
    std::vector<double> b(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        a[i] = normalize(gain * p[i] + offset);
        b[i] = normalize(r[i]);
    }
    return {TextureImage(pred.width(), pred.height(), 1, std::move(a)),
            TextureImage(ref.width(), ref.height(), 1, std::move(b))};
}

ChannelScore score(const TextureImage& a, const TextureImage& b) {
    const double e = mse(a, b);
    return {psnr_from_mse(e), e};
}

}  // namespace

double mse(const TextureImage& a, const TextureImage& b) {
    require_same_resolution(a, b, "mse");
    if (a.channels() != b.channels()) {
        throw ResolutionMismatch("mse: channel count mismatch");
    }
    const auto da = a.data();
    const auto db = b.data();
    double s = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        s += d * d;
    }
    return s / static_cast<double>(da.size());
}

double psnr_from_mse(double e) {
    if (e == 0.0) {
        return kInfinitePsnr;
    }
    return 10.0 * std::log10(1.0 / e);
}

double psnr(const TextureImage& a, const TextureImage& b) { return psnr_from_mse(mse(a, b)); }

LightBattery::LightBattery(std::vector<NamedLight> lights) : lights_(std::move(lights)) {
    if (lights_.size() != 9) {
        throw ValidationError("light battery must hold exactly nine lights");
    }
}

LightBattery LightBattery::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("light battery: ") + e.what());
    }
    try {
        const auto rad = j.at("radiance").get<std::array<double, 3>>();
        std::vector<NamedLight> lights;
        for (const auto& l : j.at("lights")) {
            lights.push_back({l.at("name").get<std::string>(),
                              DirectionalLight::from_angles(l.at("azimuth_deg").get<double>(),
                                                            l.at("elevation_deg").get<double>(),
                                                            Rgb(rad[0], rad[1], rad[2]))});
        }
        LightBattery battery(std::move(lights));
        battery.version_ = j.at("version").get<int>();
        return battery;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("light battery: ") + e.what());
    }
}

LightBattery LightBattery::standard() {
    static const LightBattery battery = from_json(detail::kLightBatteryJson);
    return battery;
}

EvalReport evaluate_material(const MaterialSet& pred, const MaterialSet& gt,
                             const LightBattery& battery) {
    require_same_resolution(pred.basecolor(), gt.basecolor(), "evaluate_material");
    EvalReport report;
    report.per_channel["basecolor"] = score(pred.basecolor(), gt.basecolor());
    report.per_channel["normal"] = score(encoded_normals(pred.normal()), encoded_normals(gt.normal()));
    report.per_channel["roughness"] = score(pred.roughness(), gt.roughness());
    report.per_channel["metalness"] = score(pred.metalness(), gt.metalness());
    const auto [ph, gh] = aligned_heights(pred.height(), gt.height());
    report.per_channel["height"] = score(ph, gh);

    double psnr_sum = 0.0;
    double mse_sum = 0.0;
    for (const auto& nl : battery.lights()) {
        const ChannelScore s =
            score(clamp01(render(pred, nl.light)), clamp01(render(gt, nl.light)));
        report.relit_per_light.push_back(s);
        psnr_sum += s.psnr_db;
        mse_sum += s.mse;
    }
    const double count = static_cast<double>(battery.lights().size());
    report.relit = {psnr_sum / count, mse_sum / count};
    report.seam_energy = seam_energy(pred.height());
    return report;
}

double seam_energy(const TextureImage& img) {
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();
    double seam = 0.0;
    std::size_t seam_count = 0;
    double interior = 0.0;
    std::size_t interior_count = 0;
    auto sq = [](double v) { return v * v; };

    for (int y = 0; y < h; ++y) {
        for (int c = 0; c < ch; ++c) {
            seam += sq(img.at(w - 1, y, c) - img.at(0, y, c));
            ++seam_count;
            for (int x = 0; x + 1 < w; ++x) {
                interior += sq(img.at(x + 1, y, c) - img.at(x, y, c));
                ++interior_count;
            }
        }
    }
    for (int x = 0; x < w; ++x) {
        for (int c = 0; c < ch; ++c) {
            seam += sq(img.at(x, h - 1, c) - img.at(x, 0, c));
            ++seam_count;
            for (int y = 0; y + 1 < h; ++y) {
                interior += sq(img.at(x, y + 1, c) - img.at(x, y, c));
                ++interior_count;
            }
        }
    }
    const double seam_mean = seam / static_cast<double>(seam_count);
    const double interior_mean =
        interior_count > 0 ? interior / static_cast<double>(interior_count) : 0.0;
    if (interior_mean == 0.0) {
        return seam_mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return seam_mean / interior_mean;
}

}  // namespace chordkit

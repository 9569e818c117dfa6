#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace chordkit;
using namespace chordkit::testing;

namespace {

// Bumpy normals: a couple of sinusoids, steep enough to constrain the light.
TextureImage bumpy_normals(int size, std::uint64_t seed) {
    Rng rng(seed);
    const auto surf = wave_surface(random_waves(rng, 4, 3), size, 0.25 * size / (2.0 * kPi));
    return normals_from_slopes(surf.p, surf.q);
}

}  // namespace

TEST(Irradiance, RecoversLambertianShading) {
    Rng rng(1);
    const TextureImage base = random_image(rng, 16, 16, 3, 0.05, 1.0);
    const TextureImage normal = random_normal_map(rng, 16, 16);
    const auto light = random_light(rng);
    const TextureImage irr = compute_irradiance(lambert_render(base, normal, light), base);
    const TextureImage shading = lambert_shading(normal, light);
    ASSERT_EQ(irr.channels(), 1);
    for (std::size_t i = 0; i < irr.pixel_count(); ++i) {
        EXPECT_NEAR(irr.data()[i], shading.data()[i] / kPi, 1e-12);
    }
}

TEST(Irradiance, ThreeChannelOptionKeepsQuotients) {
    const TextureImage rgb(1, 1, 3, {0.1, 0.2, 0.3});
    const TextureImage base(1, 1, 3, {0.5, 0.5, 0.0});
    const TextureImage irr = compute_irradiance(rgb, base, {.channels = 3});
    EXPECT_DOUBLE_EQ(irr.at(0, 0, 0), 0.2);
    EXPECT_DOUBLE_EQ(irr.at(0, 0, 1), 0.4);
    EXPECT_DOUBLE_EQ(irr.at(0, 0, 2), kIrradianceClamp);
    EXPECT_THROW(compute_irradiance(rgb, base, {.channels = 2}), ValidationError);
}

TEST(Irradiance, RejectsMismatchedOrEncodedInputs) {
    EXPECT_THROW(compute_irradiance(TextureImage::filled(2, 2, 3, 0.1), TextureImage::filled(2, 1, 3, 0.5)),
                 ResolutionMismatch);
    EXPECT_THROW(compute_irradiance(TextureImage::filled(2, 2, 3, 0.1, ColorSpace::SRGB),
                                    TextureImage::filled(2, 2, 3, 0.5)),
                 ValidationError);
}

TEST(LightEstimation, RecoversKnownDirectionOnBumpySurface) {
    Rng rng(2);
    const TextureImage normal = bumpy_normals(32, 7);
    for (int i = 0; i < 10; ++i) {
        const auto light = random_light(rng, 20.0, 80.0);
        const LightEstimate est = estimate_light(lambert_shading(normal, light), normal);
        EXPECT_LT(angular_distance_deg(est.light.direction(), light.direction()), 1.0)
            << "light az " << light.azimuth_deg() << " el " << light.elevation_deg();
        EXPECT_LT(est.residual_mse, 1e-2);
    }
}

TEST(LightEstimation, ExactGridLightIsFoundExactly) {
    const TextureImage normal = bumpy_normals(24, 3);
    const auto light = DirectionalLight::from_angles(30.0, 45.0, Rgb{1.0});
    const LightEstimate est = estimate_light(lambert_shading(normal, light), normal);
    EXPECT_LT(angular_distance_deg(est.light.direction(), light.direction()), 1e-6);
    EXPECT_NEAR(est.intensity_scale, 1.0, 1e-9);
    EXPECT_LT(est.residual_mse, 1e-20);
}

TEST(LightEstimation, FlatNormalsTieBreakToOverhead) {
    const TextureImage normal = flat_normal_map(8, 8);
    const LightEstimate est = estimate_light(TextureImage::filled(8, 8, 1, 0.7), normal);
    EXPECT_NEAR(est.light.elevation_deg(), 90.0, 1e-9);
    EXPECT_NEAR(est.intensity_scale, 0.7, 1e-12);
}

TEST(LightEstimation, RadianceCarriesDielectricCorrection) {
    const TextureImage normal = flat_normal_map(4, 4);
    const LightEstimate est = estimate_light(TextureImage::filled(4, 4, 1, 0.5), normal);
    // Overhead: h.v = 1, F = 0.04.
    EXPECT_NEAR(est.light.radiance().x, 0.5 * kPi / 0.96, 1e-12);
}

TEST(LightEstimation, OutlierRefitResistsHighlights) {
    Rng rng(12);
    const int s = 48;
    const TextureImage normal = bumpy_normals(s, 21);
    const TextureImage base = random_image(rng, s, s, 3, 0.2, 0.9);
    const MaterialSet mat = MaterialSet::without_height(base, normal, TextureImage::filled(s, s, 1, 0.35),
                                                       TextureImage::filled(s, s, 1, 0.0));
    const auto light = DirectionalLight::from_angles(110.0, 50.0, Rgb{kPi});
    const TextureImage irr = compute_irradiance(render(mat, light), base);
    LightSearchOptions plain;
    plain.outlier_passes = 0;
    const double plain_err = angular_distance_deg(estimate_light(irr, normal, plain).light.direction(),
                                                  light.direction());
    const double robust_err = angular_distance_deg(estimate_light(irr, normal).light.direction(),
                                                   light.direction());
    EXPECT_LE(robust_err, plain_err);
    EXPECT_LT(robust_err, 3.0);
}

TEST(LightEstimation, RejectsBadOptions) {
    const TextureImage normal = flat_normal_map(2, 2);
    const TextureImage irr = TextureImage::filled(2, 2, 1, 1.0);
    LightSearchOptions o;
    o.azimuth_steps = 0;
    EXPECT_THROW(estimate_light(irr, normal, o), ValidationError);
    o = {};
    o.outlier_threshold = 0.0;
    EXPECT_THROW(estimate_light(irr, normal, o), ValidationError);
    o = {};
    o.min_elevation_deg = 0.0;
    EXPECT_THROW(estimate_light(irr, normal, o), ValidationError);
}

TEST(LightEstimation, ZeroSignalThrows) {
    EXPECT_THROW(estimate_light(TextureImage::filled(4, 4, 1, 0.0), flat_normal_map(4, 4)), Error);
}

TEST(LightEstimation, IndependentOfThreadCount) {
    const TextureImage normal = bumpy_normals(32, 9);
    const auto light = DirectionalLight::from_angles(200.0, 33.0, Rgb{2.0});
    const TextureImage irr = lambert_shading(normal, light);
    set_thread_count(1);
    const LightEstimate a = estimate_light(irr, normal);
    set_thread_count(6);
    const LightEstimate b = estimate_light(irr, normal);
    set_thread_count(0);
    EXPECT_EQ(a.light.direction(), b.light.direction());
    EXPECT_EQ(a.intensity_scale, b.intensity_scale);
    EXPECT_EQ(a.residual_mse, b.residual_mse);
}

TEST(RmSearchSpace, StandardGrid) {
    const auto s = RmSearchSpace::standard();
    ASSERT_EQ(s.roughness_levels().size(), 41u);
    EXPECT_DOUBLE_EQ(s.roughness_levels().front(), 25.0 / 255.0);
    EXPECT_DOUBLE_EQ(s.roughness_levels().back(), 225.0 / 255.0);
    EXPECT_EQ(s.metalness_levels(), (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(s.candidate_count(), 82u);
    EXPECT_THROW(RmSearchSpace({0.5, 0.4}, {0.0}), ValidationError);
    EXPECT_THROW(RmSearchSpace({}, {0.0}), ValidationError);
    EXPECT_THROW(RmSearchSpace({0.5}, {1.5}), ValidationError);
}

TEST(GridSearch, MatchesNaiveOracleBitForBit) {
    Rng rng(5);
    for (int trial = 0; trial < 3; ++trial) {
        const TextureImage base = random_image(rng, 12, 10, 3);
        const TextureImage normal = random_normal_map(rng, 12, 10, 0.3);
        const TextureImage rgb = random_image(rng, 12, 10, 3, 0.0, 1.5);
        const auto light = random_light(rng);
        const auto space = RmSearchSpace::standard();
        const RmMaps got = grid_search_rm(rgb, base, normal, light, space);
        const RmMaps want = naive_grid_search(rgb, base, normal, light, space);
        EXPECT_EQ(got.roughness, want.roughness);
        EXPECT_EQ(got.metalness, want.metalness);
    }
}

TEST(GridSearch, RecoversRenderedGridValues) {
    Rng rng(6);
    const auto space = RmSearchSpace::standard();
    const int w = 16;
    std::vector<double> r(w * w);
    std::vector<double> m(w * w);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = space.roughness_levels()[static_cast<std::size_t>(rng.uniform(0.0, 41.0))];
        m[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
    }
    const MaterialSet mat = MaterialSet::without_height(
        random_image(rng, w, w, 3, 0.1, 0.9), random_normal_map(rng, w, w, 0.4),
        TextureImage(w, w, 1, r), TextureImage(w, w, 1, m));
    const auto light = random_light(rng, 30.0, 70.0);
    const RmMaps got = grid_search_rm(render(mat, light), mat.basecolor(), mat.normal(), light, space);
    int unlit = 0;
    for (int y = 0; y < w; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (dot(normal_at(mat.normal(), x, y), light.direction()) <= 0.0) {
                // Every candidate renders black: the tie goes to the first one.
                ++unlit;
                EXPECT_EQ(got.roughness.data()[i], space.roughness_levels().front());
                EXPECT_EQ(got.metalness.data()[i], space.metalness_levels().front());
                continue;
            }
            EXPECT_EQ(got.roughness.data()[i], r[i]) << "pixel " << x << "," << y;
            EXPECT_EQ(got.metalness.data()[i], m[i]) << "pixel " << x << "," << y;
        }
    }
    EXPECT_LT(unlit, w * w / 10);
}

TEST(GridSearch, UnlitPixelsResolveToFirstCandidate) {
    // Light from the left, normal tilted right: every candidate renders black.
    const Vec3 n = normalize(Vec3{0.9, 0.0, 0.1});
    const TextureImage normal(1, 1, 3, {n.x, n.y, n.z});
    const auto light = DirectionalLight::from_angles(180.0, 10.0, Rgb{kPi});
    const RmMaps got = grid_search_rm(TextureImage::filled(1, 1, 3, 0.0), TextureImage::filled(1, 1, 3, 0.5),
                                      normal, light);
    EXPECT_DOUBLE_EQ(got.roughness.at(0, 0), 25.0 / 255.0);
    EXPECT_DOUBLE_EQ(got.metalness.at(0, 0), 0.0);
}

TEST(Chain, PassthroughRunsEveryStep) {
    Rng rng(7);
    const TextureImage rgb = random_image(rng, 16, 16, 3, 0.05, 0.9);
    const ChainResult res = run_chain(rgb, passthrough_predictors());
    EXPECT_EQ(res.material.width(), 16);
    EXPECT_EQ(res.material.basecolor(), rgb);
    EXPECT_EQ(res.material.normal(), flat_normal_map(16, 16));
    EXPECT_EQ(res.material.roughness(), res.state.rm.roughness);
    EXPECT_EQ(res.state.irradiance.channels(), 1);
    for (double v : res.material.height().data()) {
        EXPECT_NEAR(v, 0.0, 1e-12);
    }
}

TEST(Chain, StepFailuresNameTheStep) {
    const TextureImage rgb = TextureImage::filled(8, 8, 3, 0.5);
    auto suite = passthrough_predictors();
    suite.normal = [](const TextureImage& img, const TextureImage&) {
        return TextureImage::filled(img.width(), img.height(), 3, 0.5);
    };
    try {
        run_chain(rgb, suite);
        FAIL() << "expected ChainStepError";
    } catch (const ChainStepError& e) {
        EXPECT_EQ(e.step(), ChainStep::Normal);
    }

    suite = passthrough_predictors();
    suite.basecolor = [](const TextureImage&) -> TextureImage { throw std::runtime_error("model offline"); };
    try {
        run_chain(rgb, suite);
        FAIL() << "expected ChainStepError";
    } catch (const ChainStepError& e) {
        EXPECT_EQ(e.step(), ChainStep::Basecolor);
        EXPECT_NE(std::string(e.what()).find("model offline"), std::string::npos);
    }

    suite = passthrough_predictors();
    suite.roughness_metalness = [](const TextureImage&, const RmMaps& rm) {
        return RmPrediction{rm.roughness, TextureImage::filled(3, 3, 1, 0.0)};
    };
    try {
        run_chain(rgb, suite);
        FAIL() << "expected ChainStepError";
    } catch (const ChainStepError& e) {
        EXPECT_EQ(e.step(), ChainStep::RoughnessMetalness);
    }
}

TEST(Chain, RecoversSyntheticMaterialWithOraclePredictors) {
    // Predictors that return the true basecolor and normal: the chain should
    // find the light and recover r, m wherever the render is informative.
    Rng rng(8);
    const int w = 32;
    const TextureImage normal = bumpy_normals(w, 4);
    const auto space = RmSearchSpace::standard();
    std::vector<double> r(w * w);
    std::vector<double> m(w * w, 0.0);
    for (double& v : r) {
        v = space.roughness_levels()[static_cast<std::size_t>(rng.uniform(10.0, 41.0))];
    }
    const MaterialSet mat = MaterialSet::without_height(random_image(rng, w, w, 3, 0.3, 0.9), normal,
                                                       TextureImage(w, w, 1, r), TextureImage(w, w, 1, m));
    const auto light = DirectionalLight::from_angles(60.0, 50.0, Rgb{kPi});
    PredictorSuite suite = passthrough_predictors();
    suite.basecolor = [&](const TextureImage&) { return mat.basecolor(); };
    suite.normal = [&](const TextureImage&, const TextureImage&) { return mat.normal(); };
    const ChainResult res = run_chain(render(mat, light), suite, space);
    EXPECT_LT(angular_distance_deg(res.state.light_estimate.light.direction(), light.direction()), 3.0);
    // Metalness is well separated from dielectric response.
    int metal_ok = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        metal_ok += res.material.metalness().data()[i] == 0.0;
    }
    EXPECT_GT(metal_ok, static_cast<int>(0.95 * m.size()));
}

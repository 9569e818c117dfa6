#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace chordkit;
using namespace chordkit::testing;

TEST(Loss, PixelL1WeightsFiveSamplesPerPixel) {
    const auto n = flat_normal_map(2, 2);
    const MaterialSet a = MaterialSet::without_height(TextureImage::filled(2, 2, 3, 0.5), n,
                                                      TextureImage::filled(2, 2, 1, 0.5),
                                                      TextureImage::filled(2, 2, 1, 0.0));
    const MaterialSet b = MaterialSet::without_height(TextureImage::filled(2, 2, 3, 0.6), n,
                                                      TextureImage::filled(2, 2, 1, 0.5),
                                                      TextureImage::filled(2, 2, 1, 1.0));
    // (3 * 0.1 + 0 + 1) / 5
    EXPECT_NEAR(pixel_l1_loss(a, b), 0.26, 1e-12);
    EXPECT_EQ(pixel_l1_loss(a, a), 0.0);
}

TEST(Loss, NormalCosine) {
    const Vec3 t = normalize(Vec3{1.0, 0.0, 1.0});
    const TextureImage tilted(1, 1, 3, {t.x, t.y, t.z});
    EXPECT_NEAR(normal_cosine_loss(tilted, flat_normal_map(1, 1)), 1.0 - t.z, 1e-12);
    EXPECT_NEAR(normal_cosine_loss(tilted, tilted), 0.0, 1e-12);
}

TEST(Loss, RandomLightsStayInRange) {
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const auto l = sample_random_light(rng);
        EXPECT_GE(l.elevation_deg(), 30.0 - 1e-9);
        EXPECT_LE(l.elevation_deg(), 75.0 + 1e-9);
        EXPECT_DOUBLE_EQ(l.radiance().x, kPi);
    }
}

TEST(Loss, TotalIsWeightedSumAndDeterministic) {
    Rng gen(2);
    const MaterialSet a = random_material(gen, 8, 8);
    const MaterialSet b = random_material(gen, 8, 8);
    OptimConfig cfg;
    cfg.weights.pixel = 2.0;
    cfg.weights.normal = 0.5;
    cfg.weights.render = 3.0;
    Rng r1(9);
    Rng r2(9);
    const LossReport x = total_loss(a, b, cfg, r1);
    const LossReport y = total_loss(a, b, cfg, r2);
    EXPECT_EQ(x.total, y.total);
    EXPECT_NEAR(x.total, 2.0 * x.pixel_l1 + 0.5 * x.normal_cosine + 3.0 * x.render_l1, 1e-12);
    EXPECT_EQ(x.per_channel.at("normal"), x.normal_cosine);
    EXPECT_GT(x.render_l1, 0.0);
    Rng r3(9);
    EXPECT_NEAR(total_loss(a, a, cfg, r3).total, 0.0, 1e-15);
}

TEST(OptimConfig, Validation) {
    OptimConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.step_size = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.render_light_samples = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.light_range = {80.0, 40.0};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Optimizer, ObjectiveNeverIncreases) {
    Rng rng(3);
    const MaterialSet gt = random_material(rng, 12, 12, 0.2, 0.8);
    const auto light = random_light(rng, 30.0, 70.0);
    const TextureImage rgb = render(gt, light);
    OptimConfig cfg;
    cfg.iterations = 60;
    const OptimResult res = optimize_material(rgb, light, lambertian_initialization(rgb, light), cfg);
    ASSERT_GE(res.objective.size(), 2u);
    for (std::size_t i = 1; i < res.objective.size(); ++i) {
        EXPECT_LE(res.objective[i], res.objective[i - 1]);
    }
    EXPECT_LT(res.objective.back(), res.objective.front());
    EXPECT_NEAR(res.objective.back(), render_error(res.material, rgb, light), 1e-12);
}

TEST(Optimizer, ExactInitStaysPut) {
    Rng rng(4);
    const MaterialSet gt = random_material(rng, 6, 6);
    const auto light = random_light(rng);
    const TextureImage rgb = render(gt, light);
    OptimConfig cfg;
    cfg.iterations = 10;
    const OptimResult res = optimize_material(rgb, light, gt, cfg);
    EXPECT_LT(res.objective.front(), 1e-12);
    EXPECT_LE(res.objective.back(), res.objective.front());
    EXPECT_LT(rms_diff(res.material.basecolor(), gt.basecolor()), 1e-6);
}

TEST(Optimizer, MaskFreezesParameters) {
    Rng rng(5);
    const MaterialSet gt = random_material(rng, 8, 8);
    const auto light = random_light(rng);
    const TextureImage rgb = render(gt, light);
    const MaterialSet init = lambertian_initialization(rgb, light);
    OptimConfig cfg;
    cfg.iterations = 20;
    cfg.optimize = {.basecolor = false, .normal = false, .roughness = true, .metalness = false};
    const MaterialSet out = optimize_material(rgb, light, init, cfg).material;
    EXPECT_EQ(out.basecolor(), init.basecolor());
    EXPECT_EQ(out.normal(), init.normal());
    EXPECT_EQ(out.metalness(), init.metalness());
}

TEST(Optimizer, ResultIsAValidMaterial) {
    Rng rng(6);
    const MaterialSet gt = random_material(rng, 10, 10);
    const auto light = random_light(rng, 20.0, 40.0);
    const TextureImage rgb = render(gt, light);
    OptimConfig cfg;
    cfg.iterations = 40;
    cfg.step_size = 0.3;
    const MaterialSet out = optimize_material(rgb, light, lambertian_initialization(rgb, light), cfg).material;
    const TextureImage nz = out.normal().channel(2);
    for (double z : nz.data()) {
        EXPECT_GE(z, kMinNormalZ - 1e-12);
    }
    double mean = 0.0;
    for (double v : out.height().data()) {
        mean += v;
    }
    EXPECT_NEAR(mean / out.height().pixel_count(), 0.0, 1e-12);
}

TEST(Optimizer, LambertianInitializationInvertsFlatDiffuse) {
    const auto light = DirectionalLight::from_angles(0.0, 90.0, Rgb{kPi});
    const TextureImage rgb = TextureImage::filled(2, 2, 3, 0.96 * 0.4);
    const MaterialSet init = lambertian_initialization(rgb, light);
    EXPECT_NEAR(init.basecolor().at(0, 0, 0), 0.4, 1e-12);
    EXPECT_EQ(init.normal(), flat_normal_map(2, 2));
}

TEST(Optimizer, DeterministicAcrossThreadCounts) {
    Rng rng(7);
    const MaterialSet gt = random_material(rng, 16, 16);
    const auto light = random_light(rng);
    const TextureImage rgb = render(gt, light);
    OptimConfig cfg;
    cfg.iterations = 15;
    set_thread_count(1);
    const OptimResult a = optimize_material(rgb, light, lambertian_initialization(rgb, light), cfg);
    set_thread_count(7);
    const OptimResult b = optimize_material(rgb, light, lambertian_initialization(rgb, light), cfg);
    set_thread_count(0);
    EXPECT_EQ(a.material, b.material);
    EXPECT_EQ(a.objective, b.objective);
}

TEST(Optimizer, PredictorSuiteFeedsTheChain) {
    Rng rng(8);
    const MaterialSet gt = random_material(rng, 16, 16, 0.2, 0.8);
    const auto light = DirectionalLight::from_angles(45.0, 60.0, Rgb{kPi});
    const TextureImage rgb = render(gt, light);
    OptimConfig cfg;
    cfg.iterations = 30;
    const ChainResult res = run_chain(rgb, optimization_predictors(light, cfg));
    EXPECT_LT(render_error(res.material, rgb, light), render_error(lambertian_initialization(rgb, light), rgb, light));
}

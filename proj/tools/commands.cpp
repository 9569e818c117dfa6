#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>

#include "chordkit/chordkit.hpp"

namespace chordkit::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "RunConfig JSON file");
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides the config)");
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = hardware concurrency)");
}

RunConfig resolve_config(const CommonOptions& opts) {
    RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_run_config(opts.config_path);
    if (opts.seed) {
        cfg.seed = *opts.seed;
        cfg.optimizer.rng_seed = *opts.seed;
    }
    return cfg;
}

fs::path output_dir(const CommonOptions& opts, const RunConfig& cfg) {
    fs::path dir = !opts.out_dir.empty() ? fs::path(opts.out_dir)
                                         : cfg.output_dir.value_or(fs::path("chordkit_out"));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    return dir;
}

TextureImage read_basecolor(const fs::path& path) {
    TextureImage b = read_linear_image(path);
    if (b.channels() != 3) {
        throw IoError("'" + path.string() + "' must be an RGB image");
    }
    std::vector<double> d(b.data().begin(), b.data().end());
    for (double& v : d) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return TextureImage(b.width(), b.height(), 3, std::move(d));
}

TextureImage read_normal_png(const fs::path& path) {
    TextureImage enc = read_png(path, ColorSpace::Linear);
    if (enc.channels() != 3) {
        throw IoError("'" + path.string() + "' must be an RGB normal map");
    }
    std::vector<double> d(enc.data().begin(), enc.data().end());
    for (std::size_t i = 0; i < d.size(); i += 3) {
        const Vec3 n = decode_normal({d[i], d[i + 1], d[i + 2]});
        if (n.z <= 0.0) {
            throw IoError("'" + path.string() + "': normal points below the surface");
        }
        d[i] = n.x;
        d[i + 1] = n.y;
        d[i + 2] = n.z;
    }
    return TextureImage(enc.width(), enc.height(), 3, std::move(d));
}

TextureImage read_rgb_input(const fs::path& path) {
    TextureImage img = read_linear_image(path);
    if (img.channels() != 3) {
        throw IoError("'" + path.string() + "' must be an RGB image");
    }
    return img;
}

void write_rm_maps(const fs::path& dir, const RmMaps& rm) {
    write_png(dir / "rm_r.png", rm.roughness);
    write_png(dir / "rm_m.png", rm.metalness);
}

void write_height(const fs::path& dir, const TextureImage& height, double pixel_scale) {
    const HeightEncoding enc = height_encoding_for(height);
    std::vector<double> stored(height.data().begin(), height.data().end());
    for (double& v : stored) {
        v = enc.scale > 0.0 ? (v - enc.offset) / enc.scale : 0.0;
    }
    write_png(dir / MaterialDirLayout::kHeight,
              TextureImage(height.width(), height.height(), 1, std::move(stored)));
    write_exr(dir / "height.exr", height);
    nlohmann::json meta;
    meta["schema"] = "chordkit.material_meta/v1";
    meta["height"] = {{"scale", enc.scale}, {"offset", enc.offset}};
    meta["pixel_scale"] = pixel_scale;
    write_text_file(dir / MaterialDirLayout::kMeta, meta.dump(2) + "\n");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    init_logging();
    CLI::App app{"chordkit: material decomposition toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "chordkit 0.1.0");

    CommonOptions common;
    std::function<void()> action;

    // render
    std::string material_dir;
    auto* render_cmd = app.add_subcommand("render", "Render a material directory under the configured light");
    render_cmd->add_option("material_dir", material_dir)->required();
    add_common(render_cmd, common);
    render_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const LoadedMaterial mat = load_material_dir(material_dir);
            const fs::path dir = output_dir(common, cfg);
            const TextureImage img = render(mat.material, cfg.light.to_light());
            write_exr(dir / "render.exr", img);
            write_preview_png(dir / "render.png", img);
            out << "render: " << img.width() << "x" << img.height() << " -> " << (dir / "render.exr").string()
                << "\n";
        };
    });

    // chain
    std::string input_rgb;
    std::string predictor = "passthrough";
    auto* chain_cmd = app.add_subcommand("chain", "Run the basecolor -> normal -> roughness/metalness chain");
    chain_cmd->add_option("input", input_rgb, "Input image (.png sRGB or .exr linear)")->required();
    chain_cmd->add_option("--predictor", predictor, "Predictor suite")
        ->check(CLI::IsMember({"passthrough", "optim"}));
    add_common(chain_cmd, common);
    chain_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const TextureImage rgb = read_rgb_input(input_rgb);
            const fs::path dir = output_dir(common, cfg);
            const PredictorSuite suite = predictor == "optim"
                                             ? optimization_predictors(cfg.light.to_light(), cfg.optimizer)
                                             : passthrough_predictors();
            const ChainResult result = run_chain(rgb, suite, cfg.rm_search, cfg.chain_options());
            save_material_dir(dir, result.material);
            write_exr(dir / "irradiance.exr", result.state.irradiance);
            write_rm_maps(dir, result.state.rm);
            write_text_file(dir / "light_estimate.json", light_estimate_to_json(result.state.light_estimate));
            const auto& l = result.state.light_estimate.light;
            out << "chain: predictor=" << predictor << " light az=" << l.azimuth_deg()
                << " el=" << l.elevation_deg() << " -> " << dir.string() << "\n";
        };
    });

    // irradiance
    std::string basecolor_path;
    auto* irr_cmd = app.add_subcommand("irradiance", "Divide an image by its basecolor");
    irr_cmd->add_option("rgb", input_rgb)->required();
    irr_cmd->add_option("basecolor", basecolor_path)->required();
    add_common(irr_cmd, common);
    irr_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const TextureImage irr = compute_irradiance(read_rgb_input(input_rgb), read_basecolor(basecolor_path),
                                                        cfg.chain_options().irradiance);
            const fs::path dir = output_dir(common, cfg);
            write_exr(dir / "irradiance.exr", irr);
            out << "irradiance: mean=" << irr.mean() << " -> " << (dir / "irradiance.exr").string() << "\n";
        };
    });

    // estimate-light
    std::string irradiance_path;
    std::string normal_path;
    auto* light_cmd = app.add_subcommand("estimate-light", "Fit a directional light to an irradiance image");
    light_cmd->add_option("irradiance", irradiance_path)->required();
    light_cmd->add_option("normal", normal_path)->required();
    add_common(light_cmd, common);
    light_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const LightEstimate est = estimate_light(read_exr(irradiance_path), read_normal_png(normal_path));
            const fs::path dir = output_dir(common, cfg);
            write_text_file(dir / "light_estimate.json", light_estimate_to_json(est));
            out << "estimate-light: az=" << est.light.azimuth_deg() << " el=" << est.light.elevation_deg()
                << " residual_mse=" << est.residual_mse << "\n";
        };
    });

    // gridsearch-rm
    std::string light_json;
    auto* grid_cmd = app.add_subcommand("gridsearch-rm", "Per-pixel roughness/metalness grid search");
    grid_cmd->add_option("rgb", input_rgb)->required();
    grid_cmd->add_option("basecolor", basecolor_path)->required();
    grid_cmd->add_option("normal", normal_path)->required();
    grid_cmd->add_option("--light", light_json, "light_estimate.json to use instead of the config light");
    add_common(grid_cmd, common);
    grid_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const DirectionalLight light = light_json.empty()
                                               ? cfg.light.to_light()
                                               : light_estimate_from_json(read_text_file(light_json)).light;
            const RmMaps rm = grid_search_rm(read_rgb_input(input_rgb), read_basecolor(basecolor_path),
                                             read_normal_png(normal_path), light, cfg.rm_search);
            const fs::path dir = output_dir(common, cfg);
            write_rm_maps(dir, rm);
            out << "gridsearch-rm: mean roughness=" << rm.roughness.mean()
                << " metal fraction=" << rm.metalness.mean() << " -> " << dir.string() << "\n";
        };
    });

    // integrate
    double scale = 1.0;
    bool scale_given = false;
    auto* int_cmd = app.add_subcommand("integrate", "Integrate a normal map into a periodic height field");
    int_cmd->add_option("normal", normal_path)->required();
    int_cmd->add_option("--scale", scale, "Height scale")->each([&](const std::string&) { scale_given = true; });
    add_common(int_cmd, common);
    int_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const double s = scale_given ? scale : cfg.height_scale;
            if (!(s > 0.0)) {
                throw ConfigError("--scale must be positive");
            }
            const TextureImage height = integrate_normals(read_normal_png(normal_path), s);
            const fs::path dir = output_dir(common, cfg);
            write_height(dir, height, 1.0);
            const auto [lo, hi] = std::ranges::minmax_element(height.data());
            out << "integrate: range=[" << *lo << ", " << *hi << "] -> " << dir.string() << "\n";
        };
    });

    // optimize
    auto* opt_cmd = app.add_subcommand("optimize", "Estimate a material by render-loss optimization");
    opt_cmd->add_option("rgb", input_rgb)->required();
    add_common(opt_cmd, common);
    opt_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const TextureImage rgb = read_rgb_input(input_rgb);
            const DirectionalLight light = cfg.light.to_light();
            const OptimResult res = optimize_material(rgb, light, lambertian_initialization(rgb, light), cfg.optimizer);
            const fs::path dir = output_dir(common, cfg);
            save_material_dir(dir, res.material);
            out << "optimize: iterations=" << res.objective.size() - 1 << " objective " << res.objective.front()
                << " -> " << res.objective.back() << " -> " << dir.string() << "\n";
        };
    });

    // eval
    std::string pred_dir;
    std::string gt_dir;
    auto* eval_cmd = app.add_subcommand("eval", "Compare a predicted material directory with ground truth");
    eval_cmd->add_option("pred_dir", pred_dir)->required();
    eval_cmd->add_option("gt_dir", gt_dir)->required();
    add_common(eval_cmd, common);
    eval_cmd->callback([&] {
        action = [&] {
            const RunConfig cfg = resolve_config(common);
            const LoadedMaterial pred = load_material_dir(pred_dir);
            const LoadedMaterial gt = load_material_dir(gt_dir);
            const LightBattery battery = LightBattery::standard();
            const EvalReport report = evaluate_material(pred.material, gt.material, battery);
            const fs::path dir = output_dir(common, cfg);
            write_text_file(dir / "report.json", eval_report_to_json(report, battery));
            out << "eval: relit psnr=" << report.relit.psnr_db
                << " basecolor psnr=" << report.per_channel.at("basecolor").psnr_db << " -> "
                << (dir / "report.json").string() << "\n";
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    set_thread_count(common.threads);
    try {
        action();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ChainStepError& e) {
        err << "error: " << e.what() << "\n";
        return kExitPredictor;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace chordkit::cli

#include "chordkit/config.hpp"

#include <initializer_list>
#include <json.hpp>
#include <string_view>

#include "chordkit/error.hpp"
#include "chordkit/material_io.hpp"

namespace chordkit {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(where) + " must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw ConfigError("unknown key '" + std::string(where) + "." + key + "'");
        }
    }
}

double number(const json& j, std::string_view key) {
    if (!j.is_number()) {
        throw ConfigError("'" + std::string(key) + "' must be a number");
    }
    return j.get<double>();
}

int integer(const json& j, std::string_view key) {
    if (!j.is_number_integer()) {
        throw ConfigError("'" + std::string(key) + "' must be an integer");
    }
    return j.get<int>();
}

Rgb radiance(const json& j) {
    if (j.is_number()) {
        return Rgb(j.get<double>());
    }
    if (j.is_array() && j.size() == 3 && j[0].is_number() && j[1].is_number() && j[2].is_number()) {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    }
    throw ConfigError("'light.radiance' must be a number or an array of three numbers");
}

std::vector<double> levels(const json& j, std::string_view key) {
    if (!j.is_array()) {
        throw ConfigError("'" + std::string(key) + "' must be an array");
    }
    std::vector<double> out;
    for (const auto& v : j) {
        out.push_back(number(v, key));
    }
    return out;
}

}  // namespace

ChainOptions RunConfig::chain_options() const {
    ChainOptions o;
    o.irradiance.channels = irradiance_channels;
    o.height_scale = height_scale;
    return o;
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root, "config",
                   {"light", "rm_search", "optimizer", "irradiance_channels", "height_scale",
                    "seed", "output_dir"});
    RunConfig cfg;
    try {
        if (root.contains("light")) {
            const json& l = root["light"];
            reject_unknown(l, "light", {"azimuth_deg", "elevation_deg", "radiance"});
            if (l.contains("azimuth_deg")) cfg.light.azimuth_deg = number(l["azimuth_deg"], "light.azimuth_deg");
            if (l.contains("elevation_deg")) cfg.light.elevation_deg = number(l["elevation_deg"], "light.elevation_deg");
            if (l.contains("radiance")) cfg.light.radiance = radiance(l["radiance"]);
            if (!(cfg.light.elevation_deg > 0.0 && cfg.light.elevation_deg <= 90.0)) {
                throw ConfigError("'light.elevation_deg' must lie in (0, 90]");
            }
            (void)cfg.light.to_light();
        }
        if (root.contains("rm_search")) {
            const json& s = root["rm_search"];
            reject_unknown(s, "rm_search", {"roughness_levels", "metalness_levels"});
            std::vector<double> r = cfg.rm_search.roughness_levels();
            std::vector<double> m = cfg.rm_search.metalness_levels();
            if (s.contains("roughness_levels")) r = levels(s["roughness_levels"], "rm_search.roughness_levels");
            if (s.contains("metalness_levels")) m = levels(s["metalness_levels"], "rm_search.metalness_levels");
            cfg.rm_search = RmSearchSpace(std::move(r), std::move(m));
        }
        if (root.contains("optimizer")) {
            const json& o = root["optimizer"];
            reject_unknown(o, "optimizer",
                           {"step_size", "iterations", "render_light_samples", "max_halvings",
                            "weights"});
            if (o.contains("step_size")) cfg.optimizer.step_size = number(o["step_size"], "optimizer.step_size");
            if (o.contains("iterations")) cfg.optimizer.iterations = integer(o["iterations"], "optimizer.iterations");
            if (o.contains("render_light_samples")) {
                cfg.optimizer.render_light_samples =
                    integer(o["render_light_samples"], "optimizer.render_light_samples");
            }
            if (o.contains("max_halvings")) cfg.optimizer.max_halvings = integer(o["max_halvings"], "optimizer.max_halvings");
            if (o.contains("weights")) {
                const json& w = o["weights"];
                reject_unknown(w, "optimizer.weights", {"pixel", "normal", "render", "perceptual"});
                if (w.contains("pixel")) cfg.optimizer.weights.pixel = number(w["pixel"], "weights.pixel");
                if (w.contains("normal")) cfg.optimizer.weights.normal = number(w["normal"], "weights.normal");
                if (w.contains("render")) cfg.optimizer.weights.render = number(w["render"], "weights.render");
                if (w.contains("perceptual")) cfg.optimizer.weights.perceptual = number(w["perceptual"], "weights.perceptual");
            }
        }
        if (root.contains("irradiance_channels")) {
            cfg.irradiance_channels = integer(root["irradiance_channels"], "irradiance_channels");
            if (cfg.irradiance_channels != 1 && cfg.irradiance_channels != 3) {
                throw ConfigError("'irradiance_channels' must be 1 or 3");
            }
        }
        if (root.contains("height_scale")) {
            cfg.height_scale = number(root["height_scale"], "height_scale");
            if (!(cfg.height_scale > 0.0)) {
                throw ConfigError("'height_scale' must be positive");
            }
        }
        if (root.contains("seed")) {
            if (!root["seed"].is_number_unsigned()) {
                throw ConfigError("'seed' must be a nonnegative integer");
            }
            cfg.seed = root["seed"].get<std::uint64_t>();
        }
        if (root.contains("output_dir")) {
            if (!root["output_dir"].is_string()) {
                throw ConfigError("'output_dir' must be a string");
            }
            cfg.output_dir = root["output_dir"].get<std::string>();
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    cfg.optimizer.height_scale = cfg.height_scale;
    cfg.optimizer.rng_seed = cfg.seed;
    cfg.optimizer.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(read_text_file(path));
}

}  // namespace chordkit

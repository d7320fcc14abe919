#include "rshc/config.hpp"

#include <cmath>

#include <json.hpp>

#include "rshc/error.hpp"

namespace rshc {

namespace {

using OrderedJson = nlohmann::ordered_json;

void reject_unknown_keys(const OrderedJson& j, std::initializer_list<const char*> known,
                         const char* where) {
    for (const auto& item : j.items()) {
        bool found = false;
        for (const char* k : known) {
            if (item.key() == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw InvalidParameterError("unknown config key \"" + item.key() + "\" in " +
                                        where);
        }
    }
}

template <typename T>
void read_field(const OrderedJson& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw InvalidParameterError(std::string("config key \"") + key +
                                        "\" has the wrong type");
        }
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(m > 0.0 && m <= 1.0)) {
        throw InvalidParameterError("lightness weight m must lie in (0, 1]");
    }
    if (slic_k < 1 || slic_iterations < 1 || !(slic_compactness > 0.0)) {
        throw InvalidParameterError("superpixel parameters out of range");
    }
    if (window_steps < 1) {
        throw InvalidParameterError("window must track at least one step");
    }
    if (hoof_bins < 1) {
        throw InvalidParameterError("histogram needs at least one bin");
    }
    if (!(motion_threshold >= 0.0) || !(color_threshold >= 0.0)) {
        throw InvalidParameterError("merge thresholds must be non-negative");
    }
    detector.validate();
    lk.validate();
    if (baseline_divisor < 1.0 || baseline_max_iters < 1) {
        throw InvalidParameterError("baseline parameters out of range");
    }
}

void apply_config_json(PipelineConfig& config, const std::string& json_text) {
    OrderedJson j;
    try {
        j = OrderedJson::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw InvalidParameterError("config root must be a JSON object");
    }

    reject_unknown_keys(j,
                        {"m", "slic", "window_steps", "hoof_bins", "motion_threshold",
                         "color_threshold", "detector", "lk", "baseline", "input_path",
                         "gt_path", "output_path", "seed"},
                        "the config root");

    read_field(j, "m", config.m);
    if (j.contains("slic")) {
        const OrderedJson& s = j.at("slic");
        reject_unknown_keys(s, {"k", "compactness", "iterations"}, "\"slic\"");
        read_field(s, "k", config.slic_k);
        read_field(s, "compactness", config.slic_compactness);
        read_field(s, "iterations", config.slic_iterations);
    }
    read_field(j, "window_steps", config.window_steps);
    read_field(j, "hoof_bins", config.hoof_bins);
    read_field(j, "motion_threshold", config.motion_threshold);
    read_field(j, "color_threshold", config.color_threshold);
    if (j.contains("detector")) {
        const OrderedJson& d = j.at("detector");
        reject_unknown_keys(d, {"max_points", "quality_threshold", "min_spacing"},
                            "\"detector\"");
        read_field(d, "max_points", config.detector.max_points);
        read_field(d, "quality_threshold", config.detector.quality_threshold);
        read_field(d, "min_spacing", config.detector.min_spacing);
    }
    if (j.contains("lk")) {
        const OrderedJson& l = j.at("lk");
        reject_unknown_keys(l,
                            {"pyramid_levels", "window_radius", "max_iterations", "epsilon",
                             "min_eig_threshold", "max_residual"},
                            "\"lk\"");
        read_field(l, "pyramid_levels", config.lk.pyramid_levels);
        read_field(l, "window_radius", config.lk.window_radius);
        read_field(l, "max_iterations", config.lk.max_iterations);
        read_field(l, "epsilon", config.lk.epsilon);
        read_field(l, "min_eig_threshold", config.lk.min_eig_threshold);
        read_field(l, "max_residual", config.lk.max_residual);
    }
    if (j.contains("baseline")) {
        const OrderedJson& b = j.at("baseline");
        reject_unknown_keys(b, {"enabled", "divisor", "max_iters"}, "\"baseline\"");
        read_field(b, "enabled", config.run_baseline);
        read_field(b, "divisor", config.baseline_divisor);
        read_field(b, "max_iters", config.baseline_max_iters);
    }
    read_field(j, "input_path", config.input_path);
    read_field(j, "gt_path", config.gt_path);
    read_field(j, "output_path", config.output_path);
    read_field(j, "seed", config.seed);
}

PipelineConfig parse_config(const std::string& json_text) {
    PipelineConfig config;
    apply_config_json(config, json_text);
    return config;
}

std::string config_to_json(const PipelineConfig& config) {
    OrderedJson j;
    j["m"] = config.m;
    j["slic"] = {{"k", config.slic_k},
                 {"compactness", config.slic_compactness},
                 {"iterations", config.slic_iterations}};
    j["window_steps"] = config.window_steps;
    j["hoof_bins"] = config.hoof_bins;
    j["motion_threshold"] = config.motion_threshold;
    j["color_threshold"] = config.color_threshold;
    j["detector"] = {{"max_points", config.detector.max_points},
                     {"quality_threshold", config.detector.quality_threshold},
                     {"min_spacing", config.detector.min_spacing}};
    j["lk"] = {{"pyramid_levels", config.lk.pyramid_levels},
               {"window_radius", config.lk.window_radius},
               {"max_iterations", config.lk.max_iterations},
               {"epsilon", config.lk.epsilon},
               {"min_eig_threshold", config.lk.min_eig_threshold},
               {"max_residual", config.lk.max_residual}};
    j["baseline"] = {{"enabled", config.run_baseline},
                     {"divisor", config.baseline_divisor},
                     {"max_iters", config.baseline_max_iters}};
    j["input_path"] = config.input_path;
    j["gt_path"] = config.gt_path;
    j["output_path"] = config.output_path;
    j["seed"] = config.seed;
    return j.dump(2);
}

}  // namespace rshc

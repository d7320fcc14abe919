#pragma once

#include <cstdint>
#include <string>

#include "rshc/motion.hpp"

namespace rshc {

// Every tunable of the pipeline, with defaults matching the reference
// parameter set. Serializes to JSON losslessly; a config file may set any
// subset of fields and command-line flags override on top.
struct PipelineConfig {
    double m = 0.5;                 // lightness weight
    int slic_k = 50;                // requested superpixel count
    double slic_compactness = 10.0;
    int slic_iterations = 10;
    int window_steps = 3;           // tracked flow steps per window
    int hoof_bins = 30;
    double motion_threshold = 1.0;  // series similarity above this merges
    double color_threshold = 15.0;  // color distance below this merges
    DetectorConfig detector;
    LkParams lk;
    bool run_baseline = false;
    double baseline_divisor = 40.0;  // points per baseline cluster
    int baseline_max_iters = 100;
    std::string input_path;
    std::string gt_path;  // empty means no ground truth
    std::string output_path;
    std::uint64_t seed = 0;

    bool operator==(const PipelineConfig&) const = default;

    void validate() const;
};

// Overwrites the fields present in the JSON text, leaving the rest alone.
// Unknown keys are rejected so typos fail loudly.
void apply_config_json(PipelineConfig& config, const std::string& json_text);

PipelineConfig parse_config(const std::string& json_text);

// Full serialization; feeding the result back through parse_config yields
// an equal config.
std::string config_to_json(const PipelineConfig& config);

}  // namespace rshc

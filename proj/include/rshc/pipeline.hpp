#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rshc/baseline.hpp"
#include "rshc/config.hpp"
#include "rshc/eval.hpp"
#include "rshc/refine.hpp"

namespace rshc {

inline constexpr const char* kMethodRshc = "rshc";
inline constexpr const char* kMethodKmeans8d = "kmeans8d";

struct MethodMetrics {
    std::string method;
    int num_clusters = 0;
    bool has_metrics = false;  // ground truth present and evaluable
    double s_er = 0.0;
    double s_compl = 0.0;
};

// Everything produced for one window of window_steps+1 frames.
struct WindowResult {
    int window_index = 0;
    int first_frame = 0;
    SuperpixelMap superpixels;
    std::vector<SalientPoint> points;
    std::vector<SuperpixelStats> superpixel_stats;  // before merging
    ClusterLabeling labeling;
    std::vector<int> baseline_cluster_of_point;  // per point; empty when baseline off
    int baseline_num_clusters = 0;
    std::vector<MethodMetrics> metrics;
};

struct PipelineResult {
    std::vector<WindowResult> windows;
};

// Frames from a directory, lexicographic filename order, uniform
// dimensions enforced.
std::vector<RgbImage> load_frames(const std::string& dir);

// Per-frame object-id maps from a directory, same ordering contract.
std::vector<Grid<std::uint8_t>> load_ground_truth(const std::string& dir);

// The core loop over non-overlapping windows: detect on the window's first
// frame, track, segment, attach statistics, merge, optionally run the
// baseline, and score against ground truth when provided (pass an empty
// vector otherwise).
PipelineResult run_pipeline_on_frames(const std::vector<RgbImage>& frames,
                                      const std::vector<Grid<std::uint8_t>>& ground_truth,
                                      const PipelineConfig& config);

// Loads inputs per the config, runs the pipeline, writes all outputs.
PipelineResult run_pipeline(const PipelineConfig& config);

// Per window: a 16-bit cluster label map, a boundary overlay of the first
// frame, plus points.json and report.json covering the whole run.
void write_outputs(const PipelineResult& result, const std::vector<RgbImage>& frames,
                   const PipelineConfig& config);

// Re-scores label maps produced by a previous run: points.json supplies the
// tracked points, the label maps supply their clusters, the ground-truth
// directory supplies the reference. Returns the report JSON text.
std::string evaluate_outputs(const std::string& labels_dir, const std::string& gt_dir,
                             const std::string& points_file);

}  // namespace rshc

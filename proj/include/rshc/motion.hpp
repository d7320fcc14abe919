#pragma once

#include <vector>

#include "rshc/color.hpp"
#include "rshc/image.hpp"

namespace rshc {

struct SalientPoint {
    double x = 0.0;
    double y = 0.0;
    int id = 0;

    bool operator==(const SalientPoint&) const = default;
};

struct DetectorConfig {
    int max_points = 2000;
    double quality_threshold = 0.01;  // fraction of the best score, (0, 1]
    double min_spacing = 8.0;         // pixels

    bool operator==(const DetectorConfig&) const = default;

    void validate() const;
};

struct LkParams {
    int pyramid_levels = 3;
    int window_radius = 10;
    int max_iterations = 30;
    double epsilon = 0.01;            // convergence step, pixels
    double min_eig_threshold = 1e-4;  // on the tensor normalized by window area
    double max_residual = 20.0;       // mean |I_t - I_{t+1}| over the window, L units

    bool operator==(const LkParams&) const = default;

    void validate() const;
};

struct FlowStep {
    double angle = 0.0;      // (-pi, pi]
    double magnitude = 0.0;  // pixels
    bool valid = false;
};

// Per-point flow history over a window of steps. Validity is monotone:
// once a track drops out it stays out.
class FlowTrackSet {
public:
    FlowTrackSet() = default;
    FlowTrackSet(int point_count, int step_count)
        : steps_(step_count),
          tracks_(point_count, std::vector<FlowStep>(step_count)) {}

    int point_count() const { return static_cast<int>(tracks_.size()); }
    int step_count() const { return steps_; }
    const FlowStep& step(int point, int t) const { return tracks_[point][t]; }
    FlowStep& step(int point, int t) { return tracks_[point][t]; }
    const std::vector<FlowStep>& track(int point) const { return tracks_[point]; }

    // True while the track survived through the given step.
    bool valid_through(int point, int t) const { return tracks_[point][t].valid; }

private:
    int steps_ = 0;
    std::vector<std::vector<FlowStep>> tracks_;
};

// Structure-tensor minimum-eigenvalue score per pixel. Exposed for tests.
GrayImage saliency_scores(const GrayImage& image);

// Scored corner detector with greedy spacing suppression. Points come back
// ordered by descending score (row-major position on ties) and are assigned
// ids 0..n-1 in that order.
std::vector<SalientPoint> detect_salient_points(const GrayImage& image,
                                                const DetectorConfig& cfg);
std::vector<SalientPoint> detect_salient_points(const WeightedLabImage& frame,
                                                const DetectorConfig& cfg);

// Coarse-to-fine Lucas-Kanade over consecutive frame pairs. frames.size()-1
// steps are produced per point.
FlowTrackSet track_flow(const std::vector<GrayImage>& frames,
                        const std::vector<SalientPoint>& points,
                        const LkParams& params);

}  // namespace rshc

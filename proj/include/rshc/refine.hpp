#pragma once

#include <vector>

#include "rshc/hoof.hpp"
#include "rshc/motion.hpp"
#include "rshc/superpixels.hpp"

namespace rshc {

// Sorted neighbor ids per superpixel, built from pixel-level 8-connectivity.
using AdjacencyGraph = std::vector<std::vector<int>>;

// Motion and appearance evidence of one superpixel (or of a merged cluster).
// Histograms stay raw; normalization happens at comparison time.
struct SuperpixelStats {
    HoofSeries hoof_series;
    LabColor mean_color;
    long long pixel_count = 0;
    int point_count = 0;
};

struct ClusterLabeling {
    std::vector<int> cluster_of;               // superpixel id -> cluster id
    std::vector<SuperpixelStats> cluster_stats;  // per compact cluster id
    int num_clusters = 0;
};

AdjacencyGraph build_adjacency(const SuperpixelMap& map);

// Distributes every tracked point's per-step flow into the HOOF series of
// the superpixel that contained the point when it was detected.
std::vector<SuperpixelStats> attach_stats(const SuperpixelMap& map,
                                          const FlowTrackSet& tracks,
                                          const std::vector<SalientPoint>& points,
                                          const std::vector<LabColor>& means,
                                          int bin_count, int step_count);

SuperpixelStats merge_stats(const SuperpixelStats& a, const SuperpixelStats& b);

// Normalized view of the raw series, for similarity evaluation.
HoofSeries normalized_series(const SuperpixelStats& stats);

// Single ascending-id sweep over the adjacency graph. Neighboring clusters
// unite when the motion series are similar enough (D_h > motion_threshold)
// or the mean colors are close enough (D_c < color_threshold); statistics
// merge as clusters grow, and later comparisons see the merged values.
ClusterLabeling merge_refine(const SuperpixelMap& map,
                             const std::vector<SuperpixelStats>& stats,
                             const AdjacencyGraph& graph, double motion_threshold,
                             double color_threshold);

}  // namespace rshc

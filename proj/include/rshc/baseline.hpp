#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rshc/color.hpp"
#include "rshc/motion.hpp"

namespace rshc {

// One feature point embedded in 8 dimensions: flow angle, flow magnitude,
// four local lightness samples, and the detection coordinates. Values are
// min-max scaled to [0, 1] per dimension over the whole extracted set.
struct FeatureVector8D {
    std::array<double, 8> v{};  // theta, magnitude, c1..c4, x, y
    int point_id = -1;
};

// Embeds every point that kept at least one valid flow step: the last valid
// step supplies (theta, magnitude), the 2x2 block at the rounded detection
// position supplies the lightness samples. Dimensions where the whole set
// shares one value scale to 0.
std::vector<FeatureVector8D> extract_8d(const std::vector<SalientPoint>& points,
                                        const FlowTrackSet& tracks,
                                        const WeightedLabImage& frame);

// Cluster-count heuristic: round(n_points / divisor), floored at 1.
int estimate_k(int n_points, double divisor);

struct KMeansResult {
    std::vector<int> cluster_of;            // per input vector
    std::vector<double> objective_history;  // after each assignment pass
    int iterations = 0;
};

// Lloyd's algorithm with seeded k-means++ initialization. Deterministic for
// a given seed on every platform. Converges when assignments stop changing
// or after max_iters passes.
KMeansResult kmeans_8d(const std::vector<FeatureVector8D>& vectors, int k,
                       int max_iters, std::uint64_t seed);

}  // namespace rshc

#pragma once

#include <cstdint>
#include <vector>

#include "rshc/error.hpp"
#include "rshc/image.hpp"
#include "rshc/motion.hpp"
#include "rshc/refine.hpp"
#include "rshc/superpixels.hpp"

namespace rshc {

// Per-frame object-id image. 0 marks void (unlabeled) pixels; objects are
// numbered 1..num_objects.
struct GroundTruthMap {
    Grid<std::uint8_t> labels;
    int num_objects = 0;
};

// Wraps a label image, deriving num_objects from the largest id present.
GroundTruthMap make_ground_truth(Grid<std::uint8_t> labels);

inline constexpr int kUnassigned = -1;

// Cluster-to-object assignment and the per-object point-id sets both
// metrics consume. Sets are sorted; index n-1 holds object n.
struct Correspondence {
    std::vector<int> object_of_cluster;              // cluster id -> object id, or kUnassigned
    std::vector<std::vector<int>> clustered_points;  // union of points in clusters mapped to the object
    std::vector<std::vector<int>> reference_points;  // points whose ground-truth pixel is the object
};

// Correspondence from per-point cluster ids (kUnassigned for points outside
// every cluster). A cluster maps to the object under its centroid, the mean
// position of its member points; empty clusters and centroids on void stay
// unassigned. Clusters sharing an object pool their points.
Correspondence correspond_point_clusters(const std::vector<SalientPoint>& points,
                                         const std::vector<int>& cluster_of_point,
                                         int num_clusters, const GroundTruthMap& gt);

// Correspondence for a superpixel clustering: each point belongs to the
// cluster of the superpixel containing its detection position.
Correspondence assign_clusters(const ClusterLabeling& labeling,
                               const std::vector<SalientPoint>& points,
                               const SuperpixelMap& map, const GroundTruthMap& gt);

// Symmetric-difference error, total over objects, normalized by the total
// reference count. 0 is perfect; heavy over-coverage can push it above 1.
double spatial_accuracy(const Correspondence& corr);

// Intersection total over objects, normalized the same way. Range [0, 1],
// 1 is perfect.
double completeness(const Correspondence& corr);

}  // namespace rshc

#include "rshc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace rshc {

GroundTruthMap make_ground_truth(Grid<std::uint8_t> labels) {
    int max_id = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        max_id = std::max(max_id, static_cast<int>(labels[i]));
    }
    return {std::move(labels), max_id};
}

namespace {

int object_at(const GroundTruthMap& gt, double x, double y) {
    int px = clamp_coord(static_cast<int>(std::lround(x)), 0, gt.labels.width() - 1);
    int py = clamp_coord(static_cast<int>(std::lround(y)), 0, gt.labels.height() - 1);
    int obj = gt.labels.at(px, py);
    if (obj > gt.num_objects) {
        throw InvalidInputError("ground-truth label exceeds the declared object count");
    }
    return obj;
}

long long intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    long long n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

void check_sets(const Correspondence& corr) {
    if (corr.clustered_points.size() != corr.reference_points.size()) {
        throw InvalidInputError("correspondence point sets cover different object counts");
    }
}

long long total_reference(const Correspondence& corr) {
    long long total = 0;
    for (const auto& set : corr.reference_points) {
        total += static_cast<long long>(set.size());
    }
    return total;
}

}  // namespace

Correspondence correspond_point_clusters(const std::vector<SalientPoint>& points,
                                         const std::vector<int>& cluster_of_point,
                                         int num_clusters, const GroundTruthMap& gt) {
    if (cluster_of_point.size() != points.size()) {
        throw InvalidInputError("per-point cluster list does not match the point list");
    }
    if (num_clusters < 0) {
        throw InvalidParameterError("cluster count cannot be negative");
    }

    Correspondence corr;
    corr.object_of_cluster.assign(num_clusters, kUnassigned);
    corr.clustered_points.assign(gt.num_objects, {});
    corr.reference_points.assign(gt.num_objects, {});

    for (const SalientPoint& p : points) {
        int obj = object_at(gt, p.x, p.y);
        if (obj > 0) {
            corr.reference_points[obj - 1].push_back(p.id);
        }
    }

    std::vector<double> sum_x(num_clusters, 0.0);
    std::vector<double> sum_y(num_clusters, 0.0);
    std::vector<int> members(num_clusters, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        int c = cluster_of_point[i];
        if (c == kUnassigned) continue;
        if (c < 0 || c >= num_clusters) {
            throw InvalidInputError("point carries an out-of-range cluster id");
        }
        sum_x[c] += points[i].x;
        sum_y[c] += points[i].y;
        ++members[c];
    }
    for (int c = 0; c < num_clusters; ++c) {
        if (members[c] == 0) continue;  // no members, centroid undefined
        int obj = object_at(gt, sum_x[c] / members[c], sum_y[c] / members[c]);
        if (obj > 0) {
            corr.object_of_cluster[c] = obj;
        }
    }

    for (std::size_t i = 0; i < points.size(); ++i) {
        int c = cluster_of_point[i];
        if (c == kUnassigned) continue;
        int obj = corr.object_of_cluster[c];
        if (obj != kUnassigned) {
            corr.clustered_points[obj - 1].push_back(points[i].id);
        }
    }

    for (auto& set : corr.reference_points) std::sort(set.begin(), set.end());
    for (auto& set : corr.clustered_points) std::sort(set.begin(), set.end());
    return corr;
}

Correspondence assign_clusters(const ClusterLabeling& labeling,
                               const std::vector<SalientPoint>& points,
                               const SuperpixelMap& map, const GroundTruthMap& gt) {
    if (gt.labels.width() != map.width() || gt.labels.height() != map.height()) {
        throw InvalidInputError("ground-truth dimensions do not match the superpixel map");
    }
    if (static_cast<int>(labeling.cluster_of.size()) != map.count()) {
        throw InvalidInputError("cluster labeling does not cover the superpixel map");
    }

    std::vector<int> cluster_of_point(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        int x = clamp_coord(static_cast<int>(std::lround(points[i].x)), 0, map.width() - 1);
        int y = clamp_coord(static_cast<int>(std::lround(points[i].y)), 0, map.height() - 1);
        cluster_of_point[i] = labeling.cluster_of[map.labels().at(x, y)];
    }
    return correspond_point_clusters(points, cluster_of_point, labeling.num_clusters, gt);
}

double spatial_accuracy(const Correspondence& corr) {
    check_sets(corr);
    long long denom = total_reference(corr);
    if (denom == 0) {
        throw UndefinedMetricError("no reference points fall on any object");
    }
    long long mismatch = 0;
    for (std::size_t n = 0; n < corr.reference_points.size(); ++n) {
        const auto& cl = corr.clustered_points[n];
        const auto& ref = corr.reference_points[n];
        mismatch += static_cast<long long>(cl.size()) + static_cast<long long>(ref.size()) -
                    2 * intersection_size(cl, ref);
    }
    return static_cast<double>(mismatch) / static_cast<double>(denom);
}

double completeness(const Correspondence& corr) {
    check_sets(corr);
    long long denom = total_reference(corr);
    if (denom == 0) {
        throw UndefinedMetricError("no reference points fall on any object");
    }
    long long overlap = 0;
    for (std::size_t n = 0; n < corr.reference_points.size(); ++n) {
        overlap += intersection_size(corr.clustered_points[n], corr.reference_points[n]);
    }
    return static_cast<double>(overlap) / static_cast<double>(denom);
}

}  // namespace rshc

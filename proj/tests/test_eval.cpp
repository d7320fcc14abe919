#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "rshc/eval.hpp"

using namespace rshc;

namespace {

Grid<std::uint8_t> label_grid(int w, int h) { return Grid<std::uint8_t>(w, h, 0); }

// Ground truth with object 1 covering x < split on a w x h frame.
GroundTruthMap left_object(int w, int h, int split) {
    Grid<std::uint8_t> g = label_grid(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < split; ++x) {
            g.at(x, y) = 1;
        }
    }
    return make_ground_truth(std::move(g));
}

// Independent recomputation of both metrics from first principles, using
// ordered sets throughout. Returns false when the metrics are undefined.
bool oracle_metrics(const std::vector<SalientPoint>& points,
                    const std::vector<int>& cluster_of_point, int num_clusters,
                    const GroundTruthMap& gt, double& s_er, double& s_compl) {
    auto lookup = [&](double x, double y) {
        int px = std::clamp(static_cast<int>(std::lround(x)), 0, gt.labels.width() - 1);
        int py = std::clamp(static_cast<int>(std::lround(y)), 0, gt.labels.height() - 1);
        return static_cast<int>(gt.labels.at(px, py));
    };

    std::vector<std::set<int>> ref(gt.num_objects), cl(gt.num_objects);
    for (const SalientPoint& p : points) {
        int obj = lookup(p.x, p.y);
        if (obj > 0) ref[obj - 1].insert(p.id);
    }
    for (int c = 0; c < num_clusters; ++c) {
        double sx = 0, sy = 0;
        int n = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (cluster_of_point[i] != c) continue;
            sx += points[i].x;
            sy += points[i].y;
            ++n;
        }
        if (n == 0) continue;
        int obj = lookup(sx / n, sy / n);
        if (obj == 0) continue;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (cluster_of_point[i] == c) cl[obj - 1].insert(points[i].id);
        }
    }

    long long denom = 0, mismatch = 0, overlap = 0;
    for (int n = 0; n < gt.num_objects; ++n) {
        denom += static_cast<long long>(ref[n].size());
        std::vector<int> common;
        std::set_intersection(cl[n].begin(), cl[n].end(), ref[n].begin(), ref[n].end(),
                              std::back_inserter(common));
        mismatch += static_cast<long long>(cl[n].size() + ref[n].size()) -
                    2 * static_cast<long long>(common.size());
        overlap += static_cast<long long>(common.size());
    }
    if (denom == 0) return false;
    s_er = static_cast<double>(mismatch) / static_cast<double>(denom);
    s_compl = static_cast<double>(overlap) / static_cast<double>(denom);
    return true;
}

}  // namespace

TEST_CASE("metric arithmetic follows the symmetric difference") {
    Correspondence corr;
    corr.object_of_cluster = {1};
    corr.clustered_points = {{0, 1, 2, 3, 4, 5, 6, 7, 10}};
    corr.reference_points = {{0, 1, 2, 3, 4, 5, 6, 7, 20, 21}};
    // 9 clustered, 10 referenced, 8 shared: error (9 + 10 - 16) / 10
    CHECK(spatial_accuracy(corr) == doctest::Approx(0.3));
    CHECK(completeness(corr) == doctest::Approx(0.8));
}

TEST_CASE("the same numbers fall out of a full correspondence") {
    GroundTruthMap gt = left_object(20, 20, 10);
    std::vector<SalientPoint> points;
    std::vector<int> cluster;
    for (int i = 0; i < 8; ++i) {  // clustered points on the object
        points.push_back({2.0, static_cast<double>(2 * i), i});
        cluster.push_back(0);
    }
    points.push_back({5.0, 3.0, 8});  // object points left out of the cluster
    cluster.push_back(kUnassigned);
    points.push_back({5.0, 9.0, 9});
    cluster.push_back(kUnassigned);
    points.push_back({15.0, 4.0, 10});  // background point swept into the cluster
    cluster.push_back(0);

    Correspondence corr = correspond_point_clusters(points, cluster, 1, gt);
    REQUIRE(corr.object_of_cluster == std::vector<int>{1});
    CHECK(corr.reference_points[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(corr.clustered_points[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 10});
    CHECK(spatial_accuracy(corr) == doctest::Approx(0.3));
    CHECK(completeness(corr) == doctest::Approx(0.8));
}

TEST_CASE("a perfect clustering scores zero error and full completeness") {
    GroundTruthMap gt = left_object(20, 20, 10);
    std::vector<SalientPoint> points{{2, 2, 0}, {4, 8, 1}, {8, 14, 2}, {15, 5, 3}};
    std::vector<int> cluster{0, 0, 0, kUnassigned};
    Correspondence corr = correspond_point_clusters(points, cluster, 1, gt);
    CHECK(spatial_accuracy(corr) == 0.0);
    CHECK(completeness(corr) == 1.0);
}

TEST_CASE("missing every object point maxes the error") {
    GroundTruthMap gt = left_object(20, 20, 10);
    std::vector<SalientPoint> points{{2, 2, 0}, {4, 8, 1}};
    std::vector<int> cluster{kUnassigned, kUnassigned};
    Correspondence corr = correspond_point_clusters(points, cluster, 0, gt);
    CHECK(spatial_accuracy(corr) == 1.0);
    CHECK(completeness(corr) == 0.0);
}

TEST_CASE("a centroid over void leaves the cluster unassigned") {
    // two narrow objects at the frame edges; the cluster spans both, so its
    // centroid lands on the empty middle
    Grid<std::uint8_t> g = label_grid(20, 20);
    for (int y = 0; y < 20; ++y) {
        for (int x = 0; x < 4; ++x) g.at(x, y) = 1;
        for (int x = 16; x < 20; ++x) g.at(x, y) = 2;
    }
    GroundTruthMap gt = make_ground_truth(std::move(g));
    REQUIRE(gt.num_objects == 2);

    std::vector<SalientPoint> points{{2, 2, 0}, {18, 2, 1}};
    std::vector<int> cluster{0, 0};
    Correspondence corr = correspond_point_clusters(points, cluster, 1, gt);
    CHECK(corr.object_of_cluster == std::vector<int>{kUnassigned});
    CHECK(corr.clustered_points[0].empty());
    CHECK(corr.clustered_points[1].empty());
    CHECK(spatial_accuracy(corr) == 1.0);
    CHECK(completeness(corr) == 0.0);
}

TEST_CASE("clusters assigned to one object pool their points") {
    GroundTruthMap gt = left_object(20, 20, 10);
    std::vector<SalientPoint> points{{2, 2, 0}, {2, 6, 1}, {6, 2, 2}, {6, 6, 3}};
    std::vector<int> cluster{0, 0, 1, 1};
    Correspondence corr = correspond_point_clusters(points, cluster, 2, gt);
    CHECK(corr.object_of_cluster == std::vector<int>{1, 1});
    CHECK(corr.clustered_points[0] == std::vector<int>{0, 1, 2, 3});
    CHECK(completeness(corr) == 1.0);
    CHECK(spatial_accuracy(corr) == 0.0);
}

TEST_CASE("heavy over-coverage pushes the error above one") {
    // central object, two object points, five background points arranged so
    // the cluster centroid (12, 61/7 -> 9) still falls on the object
    Grid<std::uint8_t> g = label_grid(30, 20);
    for (int y = 4; y < 16; ++y) {
        for (int x = 10; x < 16; ++x) g.at(x, y) = 1;
    }
    GroundTruthMap gt = make_ground_truth(std::move(g));
    std::vector<SalientPoint> points{{12, 5, 0},  {12, 15, 1}, {2, 10, 2}, {22, 10, 3},
                                     {4, 10, 4},  {20, 10, 5}, {12, 1, 6}};
    std::vector<int> cluster(points.size(), 0);
    Correspondence corr = correspond_point_clusters(points, cluster, 1, gt);
    REQUIRE(corr.object_of_cluster == std::vector<int>{1});
    CHECK(spatial_accuracy(corr) == doctest::Approx(2.5));  // (7 + 2 - 4) / 2
    CHECK(spatial_accuracy(corr) > 1.0);
    CHECK(completeness(corr) == 1.0);
}

TEST_CASE("metrics are undefined without reference points") {
    GroundTruthMap gt = left_object(20, 20, 10);
    std::vector<SalientPoint> points{{15, 5, 0}, {18, 12, 1}};  // all on void
    std::vector<int> cluster{0, 0};
    Correspondence corr = correspond_point_clusters(points, cluster, 1, gt);
    CHECK_THROWS_AS(spatial_accuracy(corr), UndefinedMetricError);
    CHECK_THROWS_AS(completeness(corr), UndefinedMetricError);
}

TEST_CASE("ground truth derives its object count from the labels") {
    Grid<std::uint8_t> g = label_grid(4, 4);
    g.at(1, 1) = 2;
    g.at(3, 3) = 5;
    CHECK(make_ground_truth(std::move(g)).num_objects == 5);
    CHECK(make_ground_truth(label_grid(4, 4)).num_objects == 0);
}

TEST_CASE("malformed correspondence inputs are rejected") {
    GroundTruthMap gt = left_object(8, 8, 4);
    std::vector<SalientPoint> points{{1, 1, 0}};
    CHECK_THROWS_AS(correspond_point_clusters(points, {0, 0}, 1, gt), InvalidInputError);
    CHECK_THROWS_AS(correspond_point_clusters(points, {5}, 1, gt), InvalidInputError);
    CHECK_THROWS_AS(correspond_point_clusters(points, {-7}, 1, gt), InvalidInputError);
    CHECK_THROWS_AS(correspond_point_clusters(points, {0}, -1, gt), InvalidParameterError);

    // declared object count below the ids actually present
    GroundTruthMap bad{Grid<std::uint8_t>(8, 8, 3), 2};
    CHECK_THROWS_AS(correspond_point_clusters(points, {0}, 1, bad), InvalidInputError);

    Correspondence lopsided;
    lopsided.clustered_points = {{0}};
    lopsided.reference_points = {{0}, {1}};
    CHECK_THROWS_AS(spatial_accuracy(lopsided), InvalidInputError);
    CHECK_THROWS_AS(completeness(lopsided), InvalidInputError);
}

TEST_CASE("superpixel labelings route points through their clusters") {
    // 10x4 frame, two 5-wide superpixels mapped to distinct clusters
    Grid<int> labels(10, 4);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 10; ++x) labels.at(x, y) = x / 5;
    }
    std::vector<Superpixel> sps(2);
    sps[0].pixel_count = sps[1].pixel_count = 20;
    SuperpixelMap map(std::move(labels), std::move(sps));

    ClusterLabeling labeling;
    labeling.cluster_of = {0, 1};
    labeling.cluster_stats.resize(2);
    labeling.num_clusters = 2;

    GroundTruthMap gt = left_object(10, 4, 5);
    std::vector<SalientPoint> points{{1.2, 1.0, 0}, {4.5, 2.0, 1}, {8.0, 1.0, 2}};
    Correspondence got = assign_clusters(labeling, points, map, gt);
    // (4.5, 2) rounds to x = 5, the right superpixel, hence cluster 1
    Correspondence want = correspond_point_clusters(points, {0, 1, 1}, 2, gt);
    CHECK(got.object_of_cluster == want.object_of_cluster);
    CHECK(got.clustered_points == want.clustered_points);
    CHECK(got.reference_points == want.reference_points);

    GroundTruthMap off = left_object(11, 4, 5);
    CHECK_THROWS_AS(assign_clusters(labeling, points, map, off), InvalidInputError);
    ClusterLabeling short_labeling;
    short_labeling.cluster_of = {0};
    short_labeling.num_clusters = 1;
    CHECK_THROWS_AS(assign_clusters(short_labeling, points, map, gt), InvalidInputError);
}

TEST_CASE("random clusterings agree with a set-based recomputation") {
    std::mt19937 rng(515);
    for (int trial = 0; trial < 50; ++trial) {
        int w = 16 + static_cast<int>(rng() % 20);
        int h = 12 + static_cast<int>(rng() % 20);
        Grid<std::uint8_t> g(w, h, 0);
        for (auto& v : g.data()) v = static_cast<std::uint8_t>(rng() % 4);
        GroundTruthMap gt = make_ground_truth(std::move(g));

        int n = 1 + static_cast<int>(rng() % 40);
        int k = 1 + static_cast<int>(rng() % 6);
        std::vector<SalientPoint> points;
        std::vector<int> cluster;
        for (int i = 0; i < n; ++i) {
            points.push_back({static_cast<double>(rng() % (10 * w)) / 10.0,
                              static_cast<double>(rng() % (10 * h)) / 10.0, i});
            cluster.push_back(rng() % 5 == 0 ? kUnassigned : static_cast<int>(rng() % k));
        }

        Correspondence corr = correspond_point_clusters(points, cluster, k, gt);
        for (const auto& set : corr.reference_points) {
            CHECK(std::is_sorted(set.begin(), set.end()));
        }
        for (const auto& set : corr.clustered_points) {
            CHECK(std::is_sorted(set.begin(), set.end()));
        }

        double want_er = 0, want_compl = 0;
        bool defined = oracle_metrics(points, cluster, k, gt, want_er, want_compl);
        if (!defined) {
            CHECK_THROWS_AS(spatial_accuracy(corr), UndefinedMetricError);
            CHECK_THROWS_AS(completeness(corr), UndefinedMetricError);
            continue;
        }
        CHECK(spatial_accuracy(corr) == want_er);
        double got_compl = completeness(corr);
        CHECK(got_compl == want_compl);
        CHECK(got_compl >= 0.0);
        CHECK(got_compl <= 1.0);
        CHECK(spatial_accuracy(corr) >= 0.0);
    }
}

#include "rshc/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rshc {

namespace {

// Union-find with path compression; the smaller root id represents the set.
class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    int unite(int a, int b) {
        int ra = find(a);
        int rb = find(b);
        if (ra == rb) return ra;
        if (rb < ra) std::swap(ra, rb);
        parent_[rb] = ra;
        return ra;
    }

private:
    std::vector<int> parent_;
};

}  // namespace

AdjacencyGraph build_adjacency(const SuperpixelMap& map) {
    const Grid<int>& labels = map.labels();
    int w = labels.width(), h = labels.height();
    std::vector<std::vector<int>> neighbors(map.count());
    auto link = [&](int a, int b) {
        if (a == b) return;
        neighbors[a].push_back(b);
        neighbors[b].push_back(a);
    };
    // right, down, down-right, down-left cover all 8-connected pairs once
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int l = labels.at(x, y);
            if (x + 1 < w) link(l, labels.at(x + 1, y));
            if (y + 1 < h) {
                link(l, labels.at(x, y + 1));
                if (x + 1 < w) link(l, labels.at(x + 1, y + 1));
                if (x > 0) link(l, labels.at(x - 1, y + 1));
            }
        }
    }
    for (auto& list : neighbors) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return neighbors;
}

std::vector<SuperpixelStats> attach_stats(const SuperpixelMap& map,
                                          const FlowTrackSet& tracks,
                                          const std::vector<SalientPoint>& points,
                                          const std::vector<LabColor>& means,
                                          int bin_count, int step_count) {
    if (static_cast<int>(means.size()) != map.count()) {
        throw InvalidInputError("mean color list does not match the superpixel map");
    }
    if (tracks.point_count() != static_cast<int>(points.size())) {
        throw InvalidInputError("track set does not match the point list");
    }
    if (tracks.point_count() > 0 && tracks.step_count() != step_count) {
        throw InvalidInputError("track set has the wrong number of steps");
    }

    std::vector<SuperpixelStats> stats(map.count());
    for (int s = 0; s < map.count(); ++s) {
        stats[s].hoof_series.assign(step_count, Hoof(bin_count));
        stats[s].mean_color = means[s];
        stats[s].pixel_count = map.superpixel(s).pixel_count;
    }

    int w = map.width(), h = map.height();
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        int x = clamp_coord(static_cast<int>(std::lround(points[pi].x)), 0, w - 1);
        int y = clamp_coord(static_cast<int>(std::lround(points[pi].y)), 0, h - 1);
        int s = map.labels().at(x, y);
        ++stats[s].point_count;
        for (int t = 0; t < step_count; ++t) {
            const FlowStep& f = tracks.step(static_cast<int>(pi), t);
            if (!f.valid) break;  // validity is monotone
            stats[s].hoof_series[t].add(f.angle, f.magnitude);
        }
    }
    return stats;
}

SuperpixelStats merge_stats(const SuperpixelStats& a, const SuperpixelStats& b) {
    if (a.hoof_series.size() != b.hoof_series.size()) {
        throw InvalidInputError("cannot merge stats with different series lengths");
    }
    SuperpixelStats out;
    out.hoof_series.reserve(a.hoof_series.size());
    for (std::size_t t = 0; t < a.hoof_series.size(); ++t) {
        const Hoof& ha = a.hoof_series[t];
        const Hoof& hb = b.hoof_series[t];
        if (ha.bin_count() != hb.bin_count()) {
            throw InvalidInputError("cannot merge stats with different bin counts");
        }
        if (ha.normalized() || hb.normalized()) {
            throw InvalidInputError("cannot merge normalized histograms");
        }
        Hoof merged(ha.bin_count());
        for (int i = 0; i < merged.bin_count(); ++i) {
            merged.add_mass(i, ha.bin(i) + hb.bin(i));
        }
        out.hoof_series.push_back(std::move(merged));
    }

    out.pixel_count = a.pixel_count + b.pixel_count;
    out.point_count = a.point_count + b.point_count;
    double wa = static_cast<double>(a.pixel_count);
    double wb = static_cast<double>(b.pixel_count);
    double total = wa + wb;
    if (total > 0.0) {
        out.mean_color = {(a.mean_color.L * wa + b.mean_color.L * wb) / total,
                          (a.mean_color.a * wa + b.mean_color.a * wb) / total,
                          (a.mean_color.b * wa + b.mean_color.b * wb) / total};
    }
    return out;
}

HoofSeries normalized_series(const SuperpixelStats& stats) {
    HoofSeries out;
    out.reserve(stats.hoof_series.size());
    for (const Hoof& h : stats.hoof_series) {
        out.push_back(normalize(h));
    }
    return out;
}

ClusterLabeling merge_refine(const SuperpixelMap& map,
                             const std::vector<SuperpixelStats>& stats,
                             const AdjacencyGraph& graph, double motion_threshold,
                             double color_threshold) {
    int n = map.count();
    if (static_cast<int>(stats.size()) != n || static_cast<int>(graph.size()) != n) {
        throw InvalidInputError("stats and adjacency must cover every superpixel");
    }

    DisjointSets sets(n);
    // current stats per set root
    std::vector<SuperpixelStats> merged(stats);

    for (int i = 0; i < n; ++i) {
        for (int j : graph[i]) {
            int ri = sets.find(i);
            int rj = sets.find(j);
            if (ri == rj) continue;
            double motion = series_similarity(normalized_series(merged[ri]),
                                              normalized_series(merged[rj]));
            double color = color_distance(merged[ri].mean_color, merged[rj].mean_color);
            if (motion > motion_threshold || color < color_threshold) {
                int root = sets.unite(ri, rj);
                merged[root] = merge_stats(merged[ri], merged[rj]);
            }
        }
    }

    ClusterLabeling out;
    out.cluster_of.assign(n, -1);
    std::vector<int> cluster_of_root(n, -1);
    for (int i = 0; i < n; ++i) {
        int root = sets.find(i);
        if (cluster_of_root[root] < 0) {
            cluster_of_root[root] = out.num_clusters++;
            out.cluster_stats.push_back(merged[root]);
        }
        out.cluster_of[i] = cluster_of_root[root];
    }
    return out;
}

}  // namespace rshc

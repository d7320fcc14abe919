#include "rshc/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rshc/error.hpp"

namespace rshc {

namespace {

// 53-bit uniform in [0, 1). Drawing bits directly keeps the sequence
// identical across standard library implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double squared_distance(const std::array<double, 8>& a, const std::array<double, 8>& b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        d2 += d * d;
    }
    return d2;
}

std::vector<std::array<double, 8>> pick_initial_centers(
    const std::vector<FeatureVector8D>& vectors, int k, std::mt19937_64& rng) {
    std::size_t n = vectors.size();
    std::vector<std::array<double, 8>> centers;
    centers.reserve(k);

    std::size_t first = std::min(static_cast<std::size_t>(uniform01(rng) * n), n - 1);
    centers.push_back(vectors[first].v);

    std::vector<double> dist2(n);
    for (std::size_t i = 0; i < n; ++i) {
        dist2[i] = squared_distance(vectors[i].v, centers[0]);
    }

    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (double d : dist2) total += d;
        std::size_t chosen = 0;
        if (total > 0.0) {
            // weight by squared distance to the nearest chosen center;
            // first index whose cumulative weight passes the draw wins,
            // so zero-weight (already covered) points are never picked
            double r = uniform01(rng) * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += dist2[i];
                if (r < cum) {
                    chosen = i;
                    break;
                }
            }
        } else {
            // every point coincides with a center; take the lowest index
            // still at distance zero (any choice is equivalent)
            chosen = 0;
        }
        centers.push_back(vectors[chosen].v);
        for (std::size_t i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i], squared_distance(vectors[i].v, centers.back()));
        }
    }
    return centers;
}

}  // namespace

std::vector<FeatureVector8D> extract_8d(const std::vector<SalientPoint>& points,
                                        const FlowTrackSet& tracks,
                                        const WeightedLabImage& frame) {
    if (tracks.point_count() != static_cast<int>(points.size())) {
        throw InvalidInputError("track set does not match the point list");
    }

    std::vector<FeatureVector8D> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        int last_valid = -1;
        for (int t = 0; t < tracks.step_count(); ++t) {
            if (!tracks.valid_through(static_cast<int>(i), t)) break;
            last_valid = t;
        }
        if (last_valid < 0) continue;

        const FlowStep& flow = tracks.step(static_cast<int>(i), last_valid);
        int px = clamp_coord(static_cast<int>(std::lround(points[i].x)), 0, frame.width() - 1);
        int py = clamp_coord(static_cast<int>(std::lround(points[i].y)), 0, frame.height() - 1);

        FeatureVector8D f;
        f.point_id = points[i].id;
        f.v[0] = flow.angle;
        f.v[1] = flow.magnitude;
        int c = 2;
        for (int dy = 0; dy <= 1; ++dy) {
            for (int dx = 0; dx <= 1; ++dx) {
                int sx = clamp_coord(px + dx, 0, frame.width() - 1);
                int sy = clamp_coord(py + dy, 0, frame.height() - 1);
                f.v[c++] = frame.at(sx, sy).L;
            }
        }
        f.v[6] = points[i].x;
        f.v[7] = points[i].y;
        out.push_back(f);
    }

    if (out.empty()) return out;

    for (std::size_t d = 0; d < 8; ++d) {
        double lo = out[0].v[d], hi = out[0].v[d];
        for (const FeatureVector8D& f : out) {
            lo = std::min(lo, f.v[d]);
            hi = std::max(hi, f.v[d]);
        }
        double range = hi - lo;
        for (FeatureVector8D& f : out) {
            f.v[d] = range > 0.0 ? (f.v[d] - lo) / range : 0.0;
        }
    }
    return out;
}

int estimate_k(int n_points, double divisor) {
    if (n_points < 1) {
        throw InvalidParameterError("cluster-count estimation needs at least one point");
    }
    if (divisor < 1.0) {
        throw InvalidParameterError("cluster-count divisor must be at least 1");
    }
    return std::max(1, static_cast<int>(std::lround(n_points / divisor)));
}

KMeansResult kmeans_8d(const std::vector<FeatureVector8D>& vectors, int k,
                       int max_iters, std::uint64_t seed) {
    if (k < 1) {
        throw InvalidParameterError("k must be at least 1");
    }
    if (static_cast<std::size_t>(k) > vectors.size()) {
        throw InvalidParameterError("k exceeds the number of feature vectors");
    }
    if (max_iters < 1) {
        throw InvalidParameterError("at least one iteration is required");
    }

    std::size_t n = vectors.size();
    std::mt19937_64 rng(seed);
    std::vector<std::array<double, 8>> centers = pick_initial_centers(vectors, k, rng);

    KMeansResult result;
    result.cluster_of.assign(n, 0);

    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d2 = squared_distance(vectors[i].v, centers[0]);
            for (int c = 1; c < k; ++c) {
                double d2 = squared_distance(vectors[i].v, centers[c]);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = c;
                }
            }
            objective += best_d2;
            if (result.cluster_of[i] != best) {
                result.cluster_of[i] = best;
                changed = true;
            }
        }
        if (!result.objective_history.empty() &&
            objective > result.objective_history.back() + 1e-9) {
            throw Error("k-means objective increased between iterations");
        }
        result.objective_history.push_back(objective);
        result.iterations = iter + 1;
        if (!changed && iter > 0) break;

        std::vector<std::array<double, 8>> sums(k, std::array<double, 8>{});
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            int c = result.cluster_of[i];
            for (std::size_t d = 0; d < 8; ++d) sums[c][d] += vectors[i].v[d];
            ++counts[c];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its center
            for (std::size_t d = 0; d < 8; ++d) {
                centers[c][d] = sums[c][d] / counts[c];
            }
        }
    }
    return result;
}

}  // namespace rshc

#include "rshc/superpixels.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace rshc {

namespace {

struct ClusterCenter {
    double L, a, b, x, y;
};

double sq(double v) { return v * v; }

LabColor pixel_color(const WeightedLabImage& image, int x, int y) {
    return image.at(clamp_coord(x, 0, image.width() - 1), clamp_coord(y, 0, image.height() - 1));
}

// 4-connected component labeling over the current label grid.
struct Component {
    int label = 0;          // superpixel label of the component
    int size = 0;
    std::size_t first = 0;  // row-major index of the first (discovery) pixel
};

constexpr int kDx4[4] = {1, -1, 0, 0};
constexpr int kDy4[4] = {0, 0, 1, -1};

void find_components(const Grid<int>& labels, Grid<int>& comp_of,
                     std::vector<Component>& comps) {
    int w = labels.width(), h = labels.height();
    std::fill(comp_of.data().begin(), comp_of.data().end(), -1);
    comps.clear();
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < labels.size(); ++start) {
        if (comp_of[start] >= 0) continue;
        int comp_id = static_cast<int>(comps.size());
        Component c;
        c.label = labels[start];
        c.first = start;
        stack.assign(1, start);
        comp_of[start] = comp_id;
        while (!stack.empty()) {
            std::size_t p = stack.back();
            stack.pop_back();
            ++c.size;
            int px = static_cast<int>(p % w);
            int py = static_cast<int>(p / w);
            for (int d = 0; d < 4; ++d) {
                int nx = px + kDx4[d], ny = py + kDy4[d];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                std::size_t q = labels.index(nx, ny);
                if (comp_of[q] < 0 && labels[q] == c.label) {
                    comp_of[q] = comp_id;
                    stack.push_back(q);
                }
            }
        }
        comps.push_back(c);
    }
}

std::vector<std::size_t> component_pixels(const Grid<int>& comp_of, int comp_id, int size,
                                          std::size_t first) {
    // collect by scanning forward from the discovery pixel
    std::vector<std::size_t> pixels;
    pixels.reserve(size);
    for (std::size_t p = first; p < comp_of.size() && static_cast<int>(pixels.size()) < size; ++p) {
        if (comp_of[p] == comp_id) pixels.push_back(p);
    }
    return pixels;
}

// Relabels every pixel of a component, choosing the target by the given rule.
// Returns false when the component has no differently-labeled neighbor.
bool relabel_component(Grid<int>& labels, const Grid<int>& comp_of, int comp_id,
                       const std::vector<std::size_t>& pixels, bool by_boundary_length,
                       const std::vector<long long>& label_sizes) {
    int w = labels.width(), h = labels.height();
    // neighbor label -> shared boundary length
    std::vector<std::pair<int, long long>> counts;
    auto bump = [&](int label) {
        for (auto& kv : counts) {
            if (kv.first == label) {
                ++kv.second;
                return;
            }
        }
        counts.emplace_back(label, 1);
    };
    for (std::size_t p : pixels) {
        int px = static_cast<int>(p % w);
        int py = static_cast<int>(p / w);
        for (int d = 0; d < 4; ++d) {
            int nx = px + kDx4[d], ny = py + kDy4[d];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            std::size_t q = labels.index(nx, ny);
            if (comp_of[q] != comp_id) bump(labels[q]);
        }
    }
    if (counts.empty()) return false;
    int best = -1;
    long long best_key = -1;
    for (const auto& [label, boundary] : counts) {
        long long key = by_boundary_length ? boundary : label_sizes[label];
        if (key > best_key || (key == best_key && label < best)) {
            best = label;
            best_key = key;
        }
    }
    for (std::size_t p : pixels) labels[p] = best;
    return true;
}

}  // namespace

void SlicParams::validate(std::size_t pixel_count) const {
    if (cluster_count < 1) {
        throw InvalidParameterError("SLIC cluster count must be >= 1");
    }
    if (static_cast<std::size_t>(cluster_count) > pixel_count) {
        throw InvalidParameterError("SLIC cluster count exceeds pixel count");
    }
    if (!(compactness > 0.0)) {
        throw InvalidParameterError("SLIC compactness must be positive");
    }
    if (iterations < 1) {
        throw InvalidParameterError("SLIC iteration count must be >= 1");
    }
}

GrayImage lab_gradient(const WeightedLabImage& image) {
    int w = image.width(), h = image.height();
    GrayImage grad(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            LabColor xp = pixel_color(image, x + 1, y);
            LabColor xm = pixel_color(image, x - 1, y);
            LabColor yp = pixel_color(image, x, y + 1);
            LabColor ym = pixel_color(image, x, y - 1);
            grad.at(x, y) = sq(xp.L - xm.L) + sq(xp.a - xm.a) + sq(xp.b - xm.b) +
                            sq(yp.L - ym.L) + sq(yp.a - ym.a) + sq(yp.b - ym.b);
        }
    }
    return grad;
}

std::vector<SeedPosition> seed_clusters(const WeightedLabImage& image, int cluster_count) {
    std::size_t pixel_count = static_cast<std::size_t>(image.width()) * image.height();
    if (cluster_count < 1 || static_cast<std::size_t>(cluster_count) > pixel_count) {
        throw InvalidParameterError("seed count must lie in [1, pixel count]");
    }
    int w = image.width(), h = image.height();
    double spacing = std::sqrt(static_cast<double>(pixel_count) / cluster_count);
    int nx = std::max(1, static_cast<int>(std::lround(w / spacing)));
    int ny = std::max(1, static_cast<int>(std::lround(h / spacing)));

    GrayImage grad = lab_gradient(image);
    std::vector<SeedPosition> seeds;
    seeds.reserve(static_cast<std::size_t>(nx) * ny);
    for (int gy = 0; gy < ny; ++gy) {
        for (int gx = 0; gx < nx; ++gx) {
            int cx = clamp_coord(static_cast<int>(std::lround((gx + 0.5) * w / nx)), 0, w - 1);
            int cy = clamp_coord(static_cast<int>(std::lround((gy + 0.5) * h / ny)), 0, h - 1);
            // move to the lowest-gradient pixel of the 3x3 neighborhood;
            // the grid center wins ties
            int bx = cx, by = cy;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    int x = cx + dx, y = cy + dy;
                    if (!grad.in_bounds(x, y)) continue;
                    if (grad.at(x, y) < grad.at(bx, by)) {
                        bx = x;
                        by = y;
                    }
                }
            }
            seeds.push_back({bx, by});
        }
    }
    return seeds;
}

SuperpixelMap slic_segment(const WeightedLabImage& image, const SlicParams& params) {
    int w = image.width(), h = image.height();
    std::size_t n = static_cast<std::size_t>(w) * h;
    params.validate(n);

    double spacing = std::sqrt(static_cast<double>(n) / params.cluster_count);
    std::vector<SeedPosition> seeds = seed_clusters(image, params.cluster_count);

    std::vector<ClusterCenter> centers;
    centers.reserve(seeds.size());
    for (const SeedPosition& s : seeds) {
        LabColor c = image.at(s.x, s.y);
        centers.push_back({c.L, c.a, c.b, static_cast<double>(s.x), static_cast<double>(s.y)});
    }

    Grid<int> labels(w, h, -1);
    std::vector<double> best_dist(n);
    double nc2 = sq(params.compactness);
    double inv_s2 = 1.0 / sq(spacing);

    for (int iter = 0; iter < params.iterations; ++iter) {
        std::fill(best_dist.begin(), best_dist.end(), std::numeric_limits<double>::infinity());
        std::fill(labels.data().begin(), labels.data().end(), -1);

        // assignment: each center claims pixels of its 2S x 2S window
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const ClusterCenter& c = centers[k];
            int x_lo = std::max(0, static_cast<int>(std::floor(c.x - spacing)));
            int x_hi = std::min(w - 1, static_cast<int>(std::ceil(c.x + spacing)));
            int y_lo = std::max(0, static_cast<int>(std::floor(c.y - spacing)));
            int y_hi = std::min(h - 1, static_cast<int>(std::ceil(c.y + spacing)));
            for (int y = y_lo; y <= y_hi; ++y) {
                for (int x = x_lo; x <= x_hi; ++x) {
                    const LabColor& p = image.at(x, y);
                    double d_color = sq(p.L - c.L) + sq(p.a - c.a) + sq(p.b - c.b);
                    double d_xy = sq(x - c.x) + sq(y - c.y);
                    double dist = d_color + d_xy * inv_s2 * nc2;
                    std::size_t idx = labels.index(x, y);
                    if (dist < best_dist[idx]) {
                        best_dist[idx] = dist;
                        labels[idx] = static_cast<int>(k);
                    }
                }
            }
        }

        // pixels outside every search window fall back to the global nearest center
        for (std::size_t idx = 0; idx < n; ++idx) {
            if (labels[idx] >= 0) continue;
            int x = static_cast<int>(idx % w);
            int y = static_cast<int>(idx / w);
            const LabColor& p = image.at(x, y);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < centers.size(); ++k) {
                const ClusterCenter& c = centers[k];
                double dist = sq(p.L - c.L) + sq(p.a - c.a) + sq(p.b - c.b) +
                              (sq(x - c.x) + sq(y - c.y)) * inv_s2 * nc2;
                if (dist < best) {
                    best = dist;
                    labels[idx] = static_cast<int>(k);
                }
            }
        }

        // update: centers move to the member means in (L, a, b, x, y)
        std::vector<ClusterCenter> sums(centers.size(), {0, 0, 0, 0, 0});
        std::vector<long long> counts(centers.size(), 0);
        for (std::size_t idx = 0; idx < n; ++idx) {
            int k = labels[idx];
            const LabColor& p = image[idx];
            sums[k].L += p.L;
            sums[k].a += p.a;
            sums[k].b += p.b;
            sums[k].x += static_cast<double>(idx % w);
            sums[k].y += static_cast<double>(idx / w);
            ++counts[k];
        }
        for (std::size_t k = 0; k < centers.size(); ++k) {
            if (counts[k] == 0) continue;  // empty cluster keeps its center
            double inv = 1.0 / counts[k];
            centers[k] = {sums[k].L * inv, sums[k].a * inv, sums[k].b * inv,
                          sums[k].x * inv, sums[k].y * inv};
        }
    }

    // --- connectivity enforcement ---
    Grid<int> comp_of(w, h, -1);
    std::vector<Component> comps;
    long long min_size = std::max<long long>(1, static_cast<long long>(spacing * spacing / 4.0));

    // absorb segments below the size floor into the neighbor with the
    // longest shared boundary
    bool changed = true;
    while (changed) {
        changed = false;
        find_components(labels, comp_of, comps);
        std::vector<long long> label_sizes(centers.size(), 0);
        for (std::size_t idx = 0; idx < n; ++idx) ++label_sizes[labels[idx]];
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            if (comps[ci].size >= min_size) continue;
            auto pixels = component_pixels(comp_of, static_cast<int>(ci), comps[ci].size,
                                           comps[ci].first);
            if (relabel_component(labels, comp_of, static_cast<int>(ci), pixels,
                                  /*by_boundary_length=*/true, label_sizes)) {
                changed = true;
            }
        }
    }

    // every remaining fragment adopts the label of its largest neighbor so
    // each label ends as one 4-connected region
    changed = true;
    while (changed) {
        changed = false;
        find_components(labels, comp_of, comps);
        std::vector<long long> label_sizes(centers.size(), 0);
        for (std::size_t idx = 0; idx < n; ++idx) ++label_sizes[labels[idx]];
        // main component of a label = its largest (first discovered on ties)
        std::vector<int> main_comp(centers.size(), -1);
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            int l = comps[ci].label;
            if (main_comp[l] < 0 || comps[ci].size > comps[main_comp[l]].size) {
                main_comp[l] = static_cast<int>(ci);
            }
        }
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            int l = comps[ci].label;
            if (main_comp[l] == static_cast<int>(ci)) continue;
            auto pixels = component_pixels(comp_of, static_cast<int>(ci), comps[ci].size,
                                           comps[ci].first);
            if (relabel_component(labels, comp_of, static_cast<int>(ci), pixels,
                                  /*by_boundary_length=*/false, label_sizes)) {
                label_sizes[l] -= comps[ci].size;
                label_sizes[labels[pixels.front()]] += comps[ci].size;
                changed = true;
            }
        }
    }

    // compact labels in row-major first-appearance order
    std::vector<int> remap(centers.size(), -1);
    int next_id = 0;
    for (std::size_t idx = 0; idx < n; ++idx) {
        int& m = remap[labels[idx]];
        if (m < 0) m = next_id++;
        labels[idx] = m;
    }

    std::vector<Superpixel> superpixels(next_id);
    std::vector<double> sum_x(next_id, 0.0), sum_y(next_id, 0.0);
    std::vector<LabColor> sum_color(next_id);
    for (std::size_t idx = 0; idx < n; ++idx) {
        int l = labels[idx];
        ++superpixels[l].pixel_count;
        sum_x[l] += static_cast<double>(idx % w);
        sum_y[l] += static_cast<double>(idx / w);
        const LabColor& p = image[idx];
        sum_color[l].L += p.L;
        sum_color[l].a += p.a;
        sum_color[l].b += p.b;
    }
    for (int l = 0; l < next_id; ++l) {
        double inv = 1.0 / superpixels[l].pixel_count;
        superpixels[l].centroid_x = sum_x[l] * inv;
        superpixels[l].centroid_y = sum_y[l] * inv;
        superpixels[l].mean_color = {sum_color[l].L * inv, sum_color[l].a * inv,
                                     sum_color[l].b * inv};
    }
    return SuperpixelMap(std::move(labels), std::move(superpixels));
}

std::vector<LabColor> mean_colors(const WeightedLabImage& image, const SuperpixelMap& map) {
    if (image.width() != map.width() || image.height() != map.height()) {
        throw InvalidInputError("superpixel map does not belong to this image");
    }
    std::vector<LabColor> sums(map.count());
    std::vector<long long> counts(map.count(), 0);
    const Grid<int>& labels = map.labels();
    for (std::size_t idx = 0; idx < labels.size(); ++idx) {
        int l = labels[idx];
        const LabColor& p = image[idx];
        sums[l].L += p.L;
        sums[l].a += p.a;
        sums[l].b += p.b;
        ++counts[l];
    }
    for (int l = 0; l < map.count(); ++l) {
        if (counts[l] > 0) {
            double inv = 1.0 / counts[l];
            sums[l] = {sums[l].L * inv, sums[l].a * inv, sums[l].b * inv};
        }
    }
    return sums;
}

}  // namespace rshc

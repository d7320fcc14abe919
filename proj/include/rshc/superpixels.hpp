#pragma once

#include <vector>

#include "rshc/color.hpp"
#include "rshc/image.hpp"

namespace rshc {

struct SlicParams {
    int cluster_count = 50;    // requested number of superpixels (K)
    double compactness = 10.0; // color-proximity weight (N_c)
    int iterations = 10;

    void validate(std::size_t pixel_count) const;
};

struct SeedPosition {
    int x = 0;
    int y = 0;

    bool operator==(const SeedPosition&) const = default;
};

struct Superpixel {
    int pixel_count = 0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    LabColor mean_color;
};

// Per-pixel superpixel labeling plus per-superpixel statistics.
// Labels are compact ids in [0, count()), each a single 4-connected region.
class SuperpixelMap {
public:
    SuperpixelMap() = default;
    SuperpixelMap(Grid<int> labels, std::vector<Superpixel> superpixels)
        : labels_(std::move(labels)), superpixels_(std::move(superpixels)) {}

    const Grid<int>& labels() const { return labels_; }
    int label_at(int x, int y) const { return labels_.at(x, y); }
    int count() const { return static_cast<int>(superpixels_.size()); }
    int width() const { return labels_.width(); }
    int height() const { return labels_.height(); }
    const Superpixel& superpixel(int id) const { return superpixels_[id]; }
    const std::vector<Superpixel>& superpixels() const { return superpixels_; }

private:
    Grid<int> labels_;
    std::vector<Superpixel> superpixels_;
};

// Grid seeding with spacing sqrt(pixels/K), each seed moved to the
// lowest-gradient pixel of its 3x3 neighborhood (ties keep the grid center).
std::vector<SeedPosition> seed_clusters(const WeightedLabImage& image, int cluster_count);

// Localized k-means over (L', a, b, x, y) followed by connectivity
// enforcement. Deterministic for identical inputs.
SuperpixelMap slic_segment(const WeightedLabImage& image, const SlicParams& params);

// Component-wise mean color of each superpixel, recomputed from the image.
std::vector<LabColor> mean_colors(const WeightedLabImage& image, const SuperpixelMap& map);

// Squared-difference gradient of the weighted Lab image, used for seed
// perturbation. Exposed for tests.
GrayImage lab_gradient(const WeightedLabImage& image);

}  // namespace rshc

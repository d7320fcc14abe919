#pragma once

#include "rshc/image.hpp"

namespace rshc {

// A CIELAB color whose L channel has been pre-scaled by the lightness
// weight m. a and b are the usual chroma axes, unscaled.
struct LabColor {
    double L = 0.0;  // weighted lightness, range [0, 100*m]
    double a = 0.0;
    double b = 0.0;

    bool operator==(const LabColor&) const = default;
};

// Frame in weighted Lab space. Keeps the weight used at conversion time so
// the unweighted lightness can be recovered (grayscale views, diagnostics).
class WeightedLabImage {
public:
    WeightedLabImage() = default;
    WeightedLabImage(int width, int height, double m);

    int width() const { return pixels_.width(); }
    int height() const { return pixels_.height(); }
    double lightness_weight() const { return m_; }

    LabColor& at(int x, int y) { return pixels_.at(x, y); }
    const LabColor& at(int x, int y) const { return pixels_.at(x, y); }
    LabColor& operator[](std::size_t i) { return pixels_[i]; }
    const LabColor& operator[](std::size_t i) const { return pixels_[i]; }

    const Grid<LabColor>& grid() const { return pixels_; }

private:
    Grid<LabColor> pixels_;
    double m_ = 1.0;
};

// sRGB (D65) -> CIELAB, then L is scaled by m. a and b pass through.
// m must lie in (0, 1].
LabColor rgb_to_weighted_lab(Rgb8 rgb, double m);

// Euclidean distance over (L', a, b). Both colors must come from the same m.
double color_distance(const LabColor& c1, const LabColor& c2);

// Whole-frame conversion.
WeightedLabImage to_weighted_lab(const RgbImage& rgb, double m);

// Unweighted lightness view (L' / m), range [0, 100]. Used for flow
// tracking so tracking does not depend on the lightness weight.
GrayImage to_grayscale(const WeightedLabImage& image);

}  // namespace rshc

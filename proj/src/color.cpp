#include "rshc/color.hpp"

#include <cmath>

namespace rshc {

namespace {

double srgb_to_linear(double c) {
    // c in [0, 1]; linearization threshold 0.04045
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double kEps = 216.0 / 24389.0;   // (6/29)^3
    constexpr double kKappa = 24389.0 / 27.0;  // (29/3)^3
    return t > kEps ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

void check_weight(double m) {
    if (!(m > 0.0 && m <= 1.0)) {
        throw InvalidParameterError("lightness weight m must lie in (0, 1]");
    }
}

}  // namespace

WeightedLabImage::WeightedLabImage(int width, int height, double m)
    : pixels_(width, height), m_(m) {
    check_weight(m);
}

LabColor rgb_to_weighted_lab(Rgb8 rgb, double m) {
    check_weight(m);

    double r = srgb_to_linear(rgb.r / 255.0);
    double g = srgb_to_linear(rgb.g / 255.0);
    double b = srgb_to_linear(rgb.b / 255.0);

    // sRGB D65 primaries
    double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

    // D65 reference white
    double fx = lab_f(x / 0.95047);
    double fy = lab_f(y / 1.0);
    double fz = lab_f(z / 1.08883);

    LabColor out;
    out.L = m * (116.0 * fy - 16.0);
    out.a = 500.0 * (fx - fy);
    out.b = 200.0 * (fy - fz);
    return out;
}

double color_distance(const LabColor& c1, const LabColor& c2) {
    double dl = c1.L - c2.L;
    double da = c1.a - c2.a;
    double db = c1.b - c2.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

WeightedLabImage to_weighted_lab(const RgbImage& rgb, double m) {
    if (rgb.empty()) {
        throw InvalidInputError("cannot convert an empty image");
    }
    WeightedLabImage out(rgb.width(), rgb.height(), m);
    for (std::size_t i = 0; i < rgb.size(); ++i) {
        out[i] = rgb_to_weighted_lab(rgb[i], m);
    }
    return out;
}

GrayImage to_grayscale(const WeightedLabImage& image) {
    GrayImage out(image.width(), image.height());
    double inv_m = 1.0 / image.lightness_weight();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = image[i].L * inv_m;
    }
    return out;
}

}  // namespace rshc

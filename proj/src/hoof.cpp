#include "rshc/hoof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rshc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bin edges live on the turn fraction in (0, 1]. Comparing there instead of
// in radians keeps exact edges exact: pi/2pi is 0.5 and lands on the closed
// side of its bin, which i*2pi/B edges would miss by one rounding.
double bin_edge(int i, int bin_count) {
    return static_cast<double>(i) / bin_count;
}

}  // namespace

Hoof::Hoof(int bin_count) {
    if (bin_count < 1) {
        throw InvalidParameterError("histogram needs at least one bin");
    }
    bins_.assign(bin_count, 0.0);
}

double Hoof::mass() const {
    double m = 0.0;
    for (double b : bins_) m += b;
    return m;
}

bool Hoof::empty_mass() const {
    for (double b : bins_) {
        if (b != 0.0) return false;
    }
    return true;
}

void Hoof::add(double angle, double magnitude) {
    if (normalized_) {
        throw InvalidInputError("cannot accumulate into a normalized histogram");
    }
    if (magnitude < 0.0 || !std::isfinite(magnitude) || !std::isfinite(angle)) {
        throw InvalidInputError("flow vector must have finite angle and magnitude >= 0");
    }
    if (magnitude <= kFlowMagnitudeCutoff) return;
    bins_[bin_index(angle, bin_count())] += magnitude;
}

void Hoof::add_mass(int bin, double mass) {
    if (normalized_) {
        throw InvalidInputError("cannot accumulate into a normalized histogram");
    }
    if (bin < 0 || bin >= bin_count()) {
        throw InvalidParameterError("bin index out of range");
    }
    if (mass < 0.0 || !std::isfinite(mass)) {
        throw InvalidInputError("bin mass must be finite and >= 0");
    }
    bins_[bin] += mass;
}

int bin_index(double angle, int bin_count) {
    if (bin_count < 1) {
        throw InvalidParameterError("histogram needs at least one bin");
    }
    double shifted = angle <= 0.0 ? angle + kTwoPi : angle;
    double u = shifted / kTwoPi;
    int b = static_cast<int>(std::ceil(u * bin_count)) - 1;
    b = std::clamp(b, 0, bin_count - 1);
    // settle exact-edge cases onto the (lo, hi] convention
    while (b > 0 && u <= bin_edge(b, bin_count)) --b;
    while (b < bin_count - 1 && u > bin_edge(b + 1, bin_count)) ++b;
    return b;
}

Hoof build_hoof(std::span<const FlowVector> vectors, int bin_count) {
    Hoof h(bin_count);
    for (const FlowVector& v : vectors) {
        h.add(v.angle, v.magnitude);
    }
    return h;
}

Hoof normalize(const Hoof& raw) {
    Hoof out = raw;
    double total = out.mass();
    if (total > 0.0) {
        for (double& b : out.bins_) b /= total;
    }
    out.normalized_ = true;
    return out;
}

double bhattacharyya_coefficient(const Hoof& h1, const Hoof& h2) {
    if (h1.bin_count() != h2.bin_count()) {
        throw InvalidInputError("histogram bin counts differ");
    }
    if (!h1.normalized() || !h2.normalized()) {
        throw InvalidInputError("Bhattacharyya comparison requires normalized histograms");
    }
    double coeff = 0.0;
    for (int i = 0; i < h1.bin_count(); ++i) {
        coeff += std::sqrt(h1.bin(i) * h2.bin(i));
    }
    return coeff;
}

double bhattacharyya_kernel(const Hoof& h1, const Hoof& h2) {
    double coeff = bhattacharyya_coefficient(h1, h2);
    if (coeff <= 0.0) return 0.0;  // disjoint or empty histograms
    double distance = -std::log(coeff);
    return std::exp(-distance);
}

double series_similarity(const HoofSeries& s1, const HoofSeries& s2) {
    if (s1.size() != s2.size()) {
        throw InvalidInputError("HOOF series lengths differ");
    }
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < s1.size(); ++t) {
        double k = bhattacharyya_kernel(s1[t], s2[t]);
        sum_sq += k * k;
    }
    return std::sqrt(sum_sq);
}

}  // namespace rshc

#pragma once

#include <span>
#include <vector>

#include "rshc/error.hpp"

namespace rshc {

struct FlowVector {
    double angle = 0.0;      // (-pi, pi]
    double magnitude = 0.0;  // >= 0
};

// Magnitudes below this carry no reliable direction and are never binned.
inline constexpr double kFlowMagnitudeCutoff = 1e-6;

// Magnitude-weighted histogram of flow angles. Raw histograms accumulate
// magnitudes; normalized ones sum to 1 (or stay all-zero when no vector
// ever contributed).
class Hoof {
public:
    Hoof() = default;
    explicit Hoof(int bin_count);

    int bin_count() const { return static_cast<int>(bins_.size()); }
    bool normalized() const { return normalized_; }
    double bin(int i) const { return bins_[i]; }
    const std::vector<double>& bins() const { return bins_; }
    double mass() const;
    bool empty_mass() const;

    // Adds one flow vector's magnitude to its angle bin. Near-zero
    // magnitudes are skipped. Raw histograms only.
    void add(double angle, double magnitude);

    // Adds mass to one bin directly, for combining raw histograms that
    // were binned elsewhere. Raw histograms only.
    void add_mass(int bin, double mass);

    friend Hoof normalize(const Hoof& raw);

private:
    std::vector<double> bins_;
    bool normalized_ = false;
};

using HoofSeries = std::vector<Hoof>;

// Angle bin on the full circle. Angles in (-pi, pi] are shifted to
// (0, 2pi] and bins are the half-open intervals (i*2pi/B, (i+1)*2pi/B].
// Edge comparisons happen on the turn fraction angle/2pi, so exact edges
// (pi with even B, the 2pi wrap) land on the closed side of their bin.
int bin_index(double angle, int bin_count);

Hoof build_hoof(std::span<const FlowVector> vectors, int bin_count);

Hoof normalize(const Hoof& raw);

// Bhattacharyya coefficient sum(sqrt(h1_i * h2_i)) of two normalized
// histograms.
double bhattacharyya_coefficient(const Hoof& h1, const Hoof& h2);

// exp(-d_B) with d_B the Bhattacharyya distance -ln(coefficient).
// Numerically identical to the coefficient; both routes are kept and
// cross-checked by tests. Empty histograms compare as maximally dissimilar.
double bhattacharyya_kernel(const Hoof& h1, const Hoof& h2);

// Magnitude of the per-step kernel vector between two histogram series:
// sqrt(sum_t k_t^2), range [0, sqrt(T_f)].
double series_similarity(const HoofSeries& s1, const HoofSeries& s2);

}  // namespace rshc

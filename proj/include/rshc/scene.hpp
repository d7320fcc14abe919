#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rshc/error.hpp"
#include "rshc/image.hpp"

namespace rshc {

// Rigid rectangle translating at whole pixels per frame.
struct RectSpec {
    int x = 0;
    int y = 0;  // top-left corner at frame 0
    int width = 0;
    int height = 0;
    Rgb8 color;
    int dx = 0;
    int dy = 0;  // px/frame

    bool operator==(const RectSpec&) const = default;
};

struct SceneSpec {
    int width = 0;
    int height = 0;
    int frame_count = 0;
    Rgb8 background_color;
    int background_dx = 0;
    int background_dy = 0;  // camera pan, px/frame
    double noise_amplitude = 0.0;
    std::vector<RectSpec> rects;

    bool operator==(const SceneSpec&) const = default;

    // Throws SceneSpecError; rectangles must stay inside the frame for
    // the whole duration.
    void validate() const;
};

struct GeneratedScene {
    std::vector<RgbImage> frames;
    // Per frame: 0 for background, n for the n-th rectangle (1-based, later
    // rectangles painted over earlier ones).
    std::vector<Grid<std::uint8_t>> ground_truth;
};

SceneSpec parse_scene_spec(const std::string& json_text);

// Deterministic under seed. Each surface (background, every rectangle)
// carries its own luminance noise texture that translates with it, so the
// motion is rigid down to the noise. Background pixels whose texture
// source has panned out of frame fall back to the solid background color.
GeneratedScene generate_scene(const SceneSpec& spec, std::uint64_t seed);

}  // namespace rshc

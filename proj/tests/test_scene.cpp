#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "rshc/scene.hpp"

using namespace rshc;

namespace {

SceneSpec basic_spec() {
    SceneSpec spec;
    spec.width = 60;
    spec.height = 40;
    spec.frame_count = 3;
    spec.background_color = {128, 128, 128};
    return spec;
}

// What the ground truth must contain given the analytic rectangle motion.
Grid<std::uint8_t> expected_gt(const SceneSpec& spec, int t) {
    Grid<std::uint8_t> gt(spec.width, spec.height, 0);
    for (std::size_t i = 0; i < spec.rects.size(); ++i) {
        const RectSpec& r = spec.rects[i];
        for (int v = 0; v < r.height; ++v) {
            for (int u = 0; u < r.width; ++u) {
                gt.at(r.x + t * r.dx + u, r.y + t * r.dy + v) =
                    static_cast<std::uint8_t>(i + 1);
            }
        }
    }
    return gt;
}

}  // namespace

TEST_CASE("scene specs parse from JSON with optional fields defaulted") {
    std::string text = R"({
        "width": 320, "height": 240, "frames": 4,
        "background": {"color": [120, 120, 120], "motion": [-1, 0]},
        "noise_amplitude": 12.0,
        "rectangles": [
            {"position": [40, 60], "size": [70, 50], "color": [200, 40, 40], "motion": [3, 0]}
        ]
    })";
    SceneSpec spec = parse_scene_spec(text);
    CHECK(spec.width == 320);
    CHECK(spec.height == 240);
    CHECK(spec.frame_count == 4);
    CHECK(spec.background_color == Rgb8{120, 120, 120});
    CHECK(spec.background_dx == -1);
    CHECK(spec.background_dy == 0);
    CHECK(spec.noise_amplitude == 12.0);
    REQUIRE(spec.rects.size() == 1);
    CHECK(spec.rects[0] == RectSpec{40, 60, 70, 50, {200, 40, 40}, 3, 0});

    SceneSpec bare = parse_scene_spec(
        R"({"width": 8, "height": 8, "frames": 1,
            "background": {"color": [0, 0, 0], "motion": [0, 0]}})");
    CHECK(bare.noise_amplitude == 0.0);
    CHECK(bare.rects.empty());
}

TEST_CASE("malformed scene JSON is rejected with a scene error") {
    CHECK_THROWS_AS(parse_scene_spec("not json"), SceneSpecError);
    CHECK_THROWS_AS(parse_scene_spec("{}"), SceneSpecError);
    CHECK_THROWS_AS(parse_scene_spec(
                        R"({"width": 8, "height": 8, "frames": 1,
                            "background": {"color": [0, 0], "motion": [0, 0]}})"),
                    SceneSpecError);
    CHECK_THROWS_AS(parse_scene_spec(
                        R"({"width": 8, "height": 8, "frames": 1,
                            "background": {"color": [0, 0, 300], "motion": [0, 0]}})"),
                    SceneSpecError);
    CHECK_THROWS_AS(parse_scene_spec(
                        R"({"width": 8, "height": 8, "frames": 1,
                            "background": {"color": [0, 0, 0], "motion": [0]}})"),
                    SceneSpecError);
}

TEST_CASE("validation pins the offending rectangle and frame") {
    SceneSpec spec = basic_spec();
    spec.rects.push_back({50, 10, 12, 8, {255, 0, 0}, 0, 0});  // 50 + 12 > 60
    CHECK_THROWS_WITH_AS(spec.validate(),
                         "rectangle 1 leaves the frame at frame 0", SceneSpecError);

    spec.rects[0] = {40, 10, 10, 8, {255, 0, 0}, 6, 0};  // exits while moving
    CHECK_THROWS_WITH_AS(spec.validate(),
                         "rectangle 1 leaves the frame at frame 2", SceneSpecError);

    spec.rects[0] = {10, 10, 0, 8, {255, 0, 0}, 0, 0};
    CHECK_THROWS_WITH_AS(spec.validate(), "rectangle 1 has non-positive size",
                         SceneSpecError);

    spec.rects.clear();
    spec.width = 0;
    CHECK_THROWS_AS(spec.validate(), SceneSpecError);

    spec = basic_spec();
    spec.frame_count = 0;
    CHECK_THROWS_AS(spec.validate(), SceneSpecError);

    spec = basic_spec();
    spec.noise_amplitude = -1.0;
    CHECK_THROWS_AS(spec.validate(), SceneSpecError);
}

TEST_CASE("a static noiseless scene renders solid colors every frame") {
    SceneSpec spec = basic_spec();
    spec.rects.push_back({10, 8, 12, 10, {200, 40, 40}, 0, 0});
    GeneratedScene scene = generate_scene(spec, 7);
    REQUIRE(scene.frames.size() == 3);
    REQUIRE(scene.ground_truth.size() == 3);

    for (int t = 0; t < 3; ++t) {
        CHECK(scene.frames[t] == scene.frames[0]);
        CHECK(scene.ground_truth[t] == expected_gt(spec, t));
        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                bool inside = x >= 10 && x < 22 && y >= 8 && y < 18;
                CHECK(scene.frames[t].at(x, y) ==
                      (inside ? Rgb8{200, 40, 40} : Rgb8{128, 128, 128}));
            }
        }
    }
}

TEST_CASE("ground truth follows the rectangles analytically") {
    SceneSpec spec = basic_spec();
    spec.noise_amplitude = 12.0;
    spec.rects.push_back({10, 5, 4, 3, {200, 40, 40}, 2, 1});
    GeneratedScene scene = generate_scene(spec, 3);
    for (int t = 0; t < spec.frame_count; ++t) {
        CHECK(scene.ground_truth[t] == expected_gt(spec, t));
    }
}

TEST_CASE("later rectangles paint over earlier ones") {
    SceneSpec spec = basic_spec();
    spec.rects.push_back({5, 5, 10, 10, {255, 0, 0}, 0, 0});
    spec.rects.push_back({10, 10, 10, 10, {0, 0, 255}, 0, 0});
    GeneratedScene scene = generate_scene(spec, 1);
    const Grid<std::uint8_t>& gt = scene.ground_truth[0];
    CHECK(gt.at(6, 6) == 1);
    CHECK(gt.at(12, 12) == 2);  // the overlap belongs to the later rectangle
    CHECK(gt.at(11, 11) == 2);
    CHECK(gt.at(25, 25) == 0);
    CHECK(scene.frames[0].at(12, 12) == Rgb8{0, 0, 255});
}

TEST_CASE("surface textures ride rigidly with their surfaces") {
    SceneSpec spec = basic_spec();
    spec.noise_amplitude = 30.0;
    spec.background_dx = -1;
    spec.rects.push_back({10, 5, 8, 6, {200, 40, 40}, 3, 2});
    GeneratedScene scene = generate_scene(spec, 11);

    const RectSpec& r = spec.rects[0];
    for (int t = 0; t + 1 < spec.frame_count; ++t) {
        // every rectangle pixel reappears displaced by (dx, dy)
        for (int v = 0; v < r.height; ++v) {
            for (int u = 0; u < r.width; ++u) {
                CHECK(scene.frames[t + 1].at(r.x + (t + 1) * r.dx + u,
                                             r.y + (t + 1) * r.dy + v) ==
                      scene.frames[t].at(r.x + t * r.dx + u, r.y + t * r.dy + v));
            }
        }
    }

    // the background pans left: interior pixels shift, the uncovered right
    // edge falls back to the solid background color
    for (int y = 20; y < 40; ++y) {
        CHECK(scene.frames[1].at(30, y) == scene.frames[0].at(31, y));
        CHECK(scene.frames[1].at(spec.width - 1, y) == spec.background_color);
    }
}

TEST_CASE("generation is deterministic in the seed, labels regardless") {
    SceneSpec spec = basic_spec();
    spec.noise_amplitude = 15.0;
    spec.rects.push_back({20, 10, 10, 10, {40, 60, 200}, 1, 1});

    GeneratedScene a = generate_scene(spec, 42);
    GeneratedScene b = generate_scene(spec, 42);
    GeneratedScene c = generate_scene(spec, 43);
    for (int t = 0; t < spec.frame_count; ++t) {
        CHECK(a.frames[t] == b.frames[t]);
        CHECK(a.ground_truth[t] == c.ground_truth[t]);
    }
    bool any_difference = false;
    for (int t = 0; t < spec.frame_count; ++t) {
        if (!(a.frames[t] == c.frames[t])) any_difference = true;
    }
    CHECK(any_difference);
}

TEST_CASE("noise stays within its amplitude and clamps at the floor") {
    SceneSpec spec = basic_spec();
    spec.noise_amplitude = 10.0;
    spec.rects.push_back({10, 8, 20, 15, {200, 40, 40}, 0, 0});
    GeneratedScene scene = generate_scene(spec, 5);
    const RgbImage& f = scene.frames[0];
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            Rgb8 p = f.at(x, y);
            if (scene.ground_truth[0].at(x, y) == 0) {
                CHECK(p.r >= 118);
                CHECK(p.r <= 138);
                CHECK(p.r == p.g);  // luminance-only noise
                CHECK(p.g == p.b);
            } else {
                CHECK(p.r >= 190);
                CHECK(p.r <= 210);
                CHECK(static_cast<int>(p.r) - p.g == 160);  // hue preserved
                CHECK(p.g == p.b);
            }
        }
    }

    // a dark background clamps at zero instead of wrapping
    SceneSpec dark = basic_spec();
    dark.background_color = {5, 5, 5};
    dark.noise_amplitude = 20.0;
    GeneratedScene low = generate_scene(dark, 9);
    int lo = 255, hi = 0;
    for (const Rgb8& p : low.frames[0].data()) {
        lo = std::min(lo, static_cast<int>(p.r));
        hi = std::max(hi, static_cast<int>(p.r));
    }
    CHECK(lo == 0);
    CHECK(hi <= 25);
}

TEST_CASE("the rectangle count is capped at the label range") {
    SceneSpec spec = basic_spec();
    spec.width = 300;
    spec.height = 300;
    for (int i = 0; i < 256; ++i) {
        spec.rects.push_back({(i % 16) * 18, (i / 16) * 18, 2, 2, {255, 255, 255}, 0, 0});
    }
    CHECK_THROWS_AS(spec.validate(), SceneSpecError);
    spec.rects.pop_back();
    spec.validate();
}

#include "rshc/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

namespace rshc {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint8_t shade(std::uint8_t base, double offset) {
    long v = std::lround(static_cast<double>(base) + offset);
    return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

Rgb8 shade_rgb(Rgb8 base, double offset) {
    return {shade(base.r, offset), shade(base.g, offset), shade(base.b, offset)};
}

Grid<double> noise_texture(int width, int height, double amplitude,
                           std::mt19937_64& rng) {
    Grid<double> tex(width, height);
    for (std::size_t i = 0; i < tex.size(); ++i) {
        tex[i] = (2.0 * uniform01(rng) - 1.0) * amplitude;
    }
    return tex;
}

Rgb8 parse_color(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) {
        throw SceneSpecError(std::string(what) + " must be an [r, g, b] triple");
    }
    for (const auto& c : j) {
        if (!c.is_number_integer() || c.get<int>() < 0 || c.get<int>() > 255) {
            throw SceneSpecError(std::string(what) + " channels must be integers in [0, 255]");
        }
    }
    return {static_cast<std::uint8_t>(j[0].get<int>()),
            static_cast<std::uint8_t>(j[1].get<int>()),
            static_cast<std::uint8_t>(j[2].get<int>())};
}

std::pair<int, int> parse_int_pair(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
        !j[1].is_number_integer()) {
        throw SceneSpecError(std::string(what) + " must be an integer pair");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

void SceneSpec::validate() const {
    if (width < 1 || height < 1) {
        throw SceneSpecError("scene dimensions must be positive");
    }
    if (frame_count < 1) {
        throw SceneSpecError("scene needs at least one frame");
    }
    if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
        throw SceneSpecError("noise amplitude must be finite and non-negative");
    }
    if (rects.size() > 255) {
        throw SceneSpecError("at most 255 rectangles are supported");
    }
    for (std::size_t i = 0; i < rects.size(); ++i) {
        const RectSpec& r = rects[i];
        if (r.width < 1 || r.height < 1) {
            throw SceneSpecError("rectangle " + std::to_string(i + 1) +
                                 " has non-positive size");
        }
        // linear motion: checking both endpoints covers every frame
        for (int t : {0, frame_count - 1}) {
            int x0 = r.x + t * r.dx;
            int y0 = r.y + t * r.dy;
            if (x0 < 0 || y0 < 0 || x0 + r.width > width || y0 + r.height > height) {
                throw SceneSpecError("rectangle " + std::to_string(i + 1) +
                                     " leaves the frame at frame " + std::to_string(t));
            }
        }
    }
}

SceneSpec parse_scene_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SceneSpecError(std::string("scene spec is not valid JSON: ") + e.what());
    }

    SceneSpec spec;
    try {
        spec.width = j.at("width").get<int>();
        spec.height = j.at("height").get<int>();
        spec.frame_count = j.at("frames").get<int>();
        const auto& bg = j.at("background");
        spec.background_color = parse_color(bg.at("color"), "background color");
        std::tie(spec.background_dx, spec.background_dy) =
            parse_int_pair(bg.at("motion"), "background motion");
        spec.noise_amplitude = j.value("noise_amplitude", 0.0);
        for (const auto& rj : j.value("rectangles", nlohmann::json::array())) {
            RectSpec r;
            std::tie(r.x, r.y) = parse_int_pair(rj.at("position"), "rectangle position");
            std::tie(r.width, r.height) = parse_int_pair(rj.at("size"), "rectangle size");
            r.color = parse_color(rj.at("color"), "rectangle color");
            std::tie(r.dx, r.dy) = parse_int_pair(rj.at("motion"), "rectangle motion");
            spec.rects.push_back(r);
        }
    } catch (const nlohmann::json::exception& e) {
        throw SceneSpecError(std::string("scene spec is missing or mistypes a field: ") +
                             e.what());
    }
    spec.validate();
    return spec;
}

GeneratedScene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
    spec.validate();

    std::mt19937_64 rng(seed);
    Grid<double> bg_tex = noise_texture(spec.width, spec.height, spec.noise_amplitude, rng);
    std::vector<Grid<double>> rect_tex;
    rect_tex.reserve(spec.rects.size());
    for (const RectSpec& r : spec.rects) {
        rect_tex.push_back(noise_texture(r.width, r.height, spec.noise_amplitude, rng));
    }

    GeneratedScene scene;
    scene.frames.reserve(spec.frame_count);
    scene.ground_truth.reserve(spec.frame_count);
    for (int t = 0; t < spec.frame_count; ++t) {
        RgbImage frame(spec.width, spec.height);
        Grid<std::uint8_t> gt(spec.width, spec.height, 0);

        for (int y = 0; y < spec.height; ++y) {
            for (int x = 0; x < spec.width; ++x) {
                int sx = x - t * spec.background_dx;
                int sy = y - t * spec.background_dy;
                double offset = bg_tex.in_bounds(sx, sy) ? bg_tex.at(sx, sy) : 0.0;
                frame.at(x, y) = shade_rgb(spec.background_color, offset);
            }
        }

        for (std::size_t i = 0; i < spec.rects.size(); ++i) {
            const RectSpec& r = spec.rects[i];
            int left = r.x + t * r.dx;
            int top = r.y + t * r.dy;
            auto id = static_cast<std::uint8_t>(i + 1);
            for (int v = 0; v < r.height; ++v) {
                for (int u = 0; u < r.width; ++u) {
                    frame.at(left + u, top + v) = shade_rgb(r.color, rect_tex[i].at(u, v));
                    gt.at(left + u, top + v) = id;
                }
            }
        }

        scene.frames.push_back(std::move(frame));
        scene.ground_truth.push_back(std::move(gt));
    }
    return scene;
}

}  // namespace rshc

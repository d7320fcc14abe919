#include "rshc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "rshc/image_io.hpp"

namespace rshc {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

namespace {

std::vector<fs::path> list_image_files(const std::string& dir) {
    fs::path root(dir);
    if (!fs::is_directory(root)) {
        throw IoError("not a directory: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_regular_file() && is_supported_image(entry.path())) {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) {
        throw IoError("no image files found in " + dir);
    }
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });
    return files;
}

std::string window_file_name(const char* prefix, int index, const char* ext) {
    std::ostringstream name;
    name << prefix << '_' << std::setw(3) << std::setfill('0') << index << ext;
    return name.str();
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text << '\n';
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

MethodMetrics score_correspondence(const std::string& method, int num_clusters,
                                   const Correspondence& corr) {
    MethodMetrics m;
    m.method = method;
    m.num_clusters = num_clusters;
    try {
        m.s_er = spatial_accuracy(corr);
        m.s_compl = completeness(corr);
        m.has_metrics = true;
    } catch (const UndefinedMetricError&) {
        // no reference points under any object; scores stay unreported
    }
    return m;
}

OrderedJson metrics_json(const MethodMetrics& m) {
    OrderedJson r;
    r["method"] = m.method;
    r["num_clusters"] = m.num_clusters;
    if (m.has_metrics) {
        r["s_er"] = m.s_er;
        r["s_compl"] = m.s_compl;
    }
    return r;
}

}  // namespace

std::vector<RgbImage> load_frames(const std::string& dir) {
    std::vector<RgbImage> frames;
    for (const fs::path& file : list_image_files(dir)) {
        RgbImage frame = load_rgb(file);
        if (!frames.empty() && (frame.width() != frames.front().width() ||
                                frame.height() != frames.front().height())) {
            throw InvalidInputError("frame dimensions differ: " + file.string());
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

std::vector<Grid<std::uint8_t>> load_ground_truth(const std::string& dir) {
    std::vector<Grid<std::uint8_t>> maps;
    for (const fs::path& file : list_image_files(dir)) {
        Grid<std::uint8_t> map = load_gray8(file);
        if (!maps.empty() && (map.width() != maps.front().width() ||
                              map.height() != maps.front().height())) {
            throw InvalidInputError("ground-truth dimensions differ: " + file.string());
        }
        maps.push_back(std::move(map));
    }
    return maps;
}

PipelineResult run_pipeline_on_frames(const std::vector<RgbImage>& frames,
                                      const std::vector<Grid<std::uint8_t>>& ground_truth,
                                      const PipelineConfig& config) {
    config.validate();
    int steps = config.window_steps;
    if (static_cast<int>(frames.size()) < steps + 1) {
        throw PipelineError("need at least " + std::to_string(steps + 1) +
                            " frames, got " + std::to_string(frames.size()));
    }
    if (!ground_truth.empty() && ground_truth.size() != frames.size()) {
        throw InvalidInputError("ground-truth frame count does not match the input");
    }
    for (const auto& gt : ground_truth) {
        if (gt.width() != frames.front().width() || gt.height() != frames.front().height()) {
            throw InvalidInputError("ground-truth dimensions do not match the frames");
        }
    }

    std::vector<GrayImage> grays;
    grays.reserve(frames.size());
    for (const RgbImage& f : frames) {
        grays.push_back(to_grayscale(to_weighted_lab(f, config.m)));
    }

    PipelineResult result;
    int n_windows = (static_cast<int>(frames.size()) - 1) / steps;
    for (int w = 0; w < n_windows; ++w) {
        int f0 = w * steps;
        WindowResult window;
        window.window_index = w;
        window.first_frame = f0;

        WeightedLabImage lab0 = to_weighted_lab(frames[f0], config.m);
        window.points = detect_salient_points(grays[f0], config.detector);

        std::vector<GrayImage> window_grays(grays.begin() + f0,
                                            grays.begin() + f0 + steps + 1);
        FlowTrackSet tracks = track_flow(window_grays, window.points, config.lk);

        SlicParams slic{config.slic_k, config.slic_compactness, config.slic_iterations};
        window.superpixels = slic_segment(lab0, slic);

        std::vector<LabColor> means;
        means.reserve(window.superpixels.count());
        for (const Superpixel& sp : window.superpixels.superpixels()) {
            means.push_back(sp.mean_color);
        }
        window.superpixel_stats = attach_stats(window.superpixels, tracks, window.points,
                                               means, config.hoof_bins, steps);
        AdjacencyGraph graph = build_adjacency(window.superpixels);
        window.labeling = merge_refine(window.superpixels, window.superpixel_stats, graph,
                                       config.motion_threshold, config.color_threshold);

        bool have_gt = !ground_truth.empty();
        GroundTruthMap gt;
        if (have_gt) {
            gt = make_ground_truth(ground_truth[f0]);
            Correspondence corr =
                assign_clusters(window.labeling, window.points, window.superpixels, gt);
            window.metrics.push_back(
                score_correspondence(kMethodRshc, window.labeling.num_clusters, corr));
        } else {
            MethodMetrics m;
            m.method = kMethodRshc;
            m.num_clusters = window.labeling.num_clusters;
            window.metrics.push_back(m);
        }

        if (config.run_baseline) {
            std::vector<FeatureVector8D> features =
                extract_8d(window.points, tracks, lab0);
            window.baseline_cluster_of_point.assign(window.points.size(), kUnassigned);
            if (!features.empty()) {
                int k = estimate_k(static_cast<int>(features.size()),
                                   config.baseline_divisor);
                KMeansResult km =
                    kmeans_8d(features, k, config.baseline_max_iters,
                              config.seed + static_cast<std::uint64_t>(w));
                window.baseline_num_clusters = k;

                std::vector<int> index_of_id(window.points.size(), -1);
                for (std::size_t i = 0; i < window.points.size(); ++i) {
                    int id = window.points[i].id;
                    if (id < 0 || id >= static_cast<int>(window.points.size())) {
                        throw InvalidInputError("point ids must be compact for clustering");
                    }
                    index_of_id[id] = static_cast<int>(i);
                }
                for (std::size_t fi = 0; fi < features.size(); ++fi) {
                    window.baseline_cluster_of_point[index_of_id[features[fi].point_id]] =
                        km.cluster_of[fi];
                }
            }
            if (have_gt) {
                Correspondence corr = correspond_point_clusters(
                    window.points, window.baseline_cluster_of_point,
                    window.baseline_num_clusters, gt);
                window.metrics.push_back(score_correspondence(
                    kMethodKmeans8d, window.baseline_num_clusters, corr));
            } else {
                MethodMetrics m;
                m.method = kMethodKmeans8d;
                m.num_clusters = window.baseline_num_clusters;
                window.metrics.push_back(m);
            }
        }

        result.windows.push_back(std::move(window));
    }
    return result;
}

void write_outputs(const PipelineResult& result, const std::vector<RgbImage>& frames,
                   const PipelineConfig& config) {
    fs::path out(config.output_path);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out.string());
    }

    OrderedJson points_doc;
    points_doc["windows"] = OrderedJson::array();
    OrderedJson report;
    report["config"] = OrderedJson::parse(config_to_json(config));
    report["windows"] = OrderedJson::array();

    for (const WindowResult& window : result.windows) {
        const SuperpixelMap& map = window.superpixels;
        if (window.labeling.num_clusters > 65536) {
            throw IoError("too many clusters for a 16-bit label map");
        }

        Grid<std::uint16_t> label_map(map.width(), map.height());
        for (int y = 0; y < map.height(); ++y) {
            for (int x = 0; x < map.width(); ++x) {
                label_map.at(x, y) = static_cast<std::uint16_t>(
                    window.labeling.cluster_of[map.label_at(x, y)]);
            }
        }
        save_png_gray16(label_map,
                        out / window_file_name("labels", window.window_index, ".png"));

        RgbImage overlay = frames[window.first_frame];
        for (int y = 0; y < map.height(); ++y) {
            for (int x = 0; x < map.width(); ++x) {
                int c = label_map.at(x, y);
                bool edge = (x + 1 < map.width() && label_map.at(x + 1, y) != c) ||
                            (y + 1 < map.height() && label_map.at(x, y + 1) != c);
                if (edge) {
                    overlay.at(x, y) = {255, 255, 0};
                }
            }
        }
        save_png_rgb(overlay,
                     out / window_file_name("overlay", window.window_index, ".png"));

        OrderedJson pw;
        pw["window"] = window.window_index;
        pw["first_frame"] = window.first_frame;
        pw["points"] = OrderedJson::array();
        for (const SalientPoint& p : window.points) {
            pw["points"].push_back({{"id", p.id}, {"x", p.x}, {"y", p.y}});
        }
        points_doc["windows"].push_back(std::move(pw));

        OrderedJson rw;
        rw["window"] = window.window_index;
        rw["first_frame"] = window.first_frame;
        rw["results"] = OrderedJson::array();
        for (const MethodMetrics& m : window.metrics) {
            rw["results"].push_back(metrics_json(m));
        }
        report["windows"].push_back(std::move(rw));
    }

    write_text_file(out / "points.json", points_doc.dump(2));
    write_text_file(out / "report.json", report.dump(2));
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    if (config.input_path.empty() || config.output_path.empty()) {
        throw PipelineError("input and output paths are required");
    }
    std::vector<RgbImage> frames = load_frames(config.input_path);
    std::vector<Grid<std::uint8_t>> ground_truth;
    if (!config.gt_path.empty()) {
        ground_truth = load_ground_truth(config.gt_path);
    }
    PipelineResult result = run_pipeline_on_frames(frames, ground_truth, config);
    write_outputs(result, frames, config);
    return result;
}

std::string evaluate_outputs(const std::string& labels_dir, const std::string& gt_dir,
                             const std::string& points_file) {
    OrderedJson points_doc;
    try {
        points_doc = OrderedJson::parse(read_text_file(points_file));
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("points file is not valid JSON: ") + e.what());
    }
    if (!points_doc.contains("windows") || !points_doc["windows"].is_array()) {
        throw InvalidInputError("points file has no \"windows\" array");
    }

    std::vector<fs::path> gt_files = list_image_files(gt_dir);

    OrderedJson report;
    report["windows"] = OrderedJson::array();
    for (const auto& pw : points_doc["windows"]) {
        int window_index = pw.at("window").get<int>();
        int first_frame = pw.at("first_frame").get<int>();

        fs::path label_path =
            fs::path(labels_dir) / window_file_name("labels", window_index, ".png");
        if (!fs::exists(label_path)) {
            throw IoError("missing label map " + label_path.string());
        }
        Grid<std::uint16_t> label_map = load_gray16(label_path);

        if (first_frame < 0 || first_frame >= static_cast<int>(gt_files.size())) {
            throw IoError("no ground-truth frame with index " +
                          std::to_string(first_frame) + " in " + gt_dir);
        }
        GroundTruthMap gt = make_ground_truth(load_gray8(gt_files[first_frame]));
        if (gt.labels.width() != label_map.width() ||
            gt.labels.height() != label_map.height()) {
            throw InvalidInputError("ground-truth dimensions do not match the label map");
        }

        std::vector<SalientPoint> points;
        std::vector<int> cluster_of_point;
        int num_clusters = 0;
        for (std::size_t i = 0; i < label_map.size(); ++i) {
            num_clusters = std::max(num_clusters, static_cast<int>(label_map[i]) + 1);
        }
        for (const auto& pj : pw.at("points")) {
            SalientPoint p;
            p.id = pj.at("id").get<int>();
            p.x = pj.at("x").get<double>();
            p.y = pj.at("y").get<double>();
            int px = clamp_coord(static_cast<int>(std::lround(p.x)), 0,
                                 label_map.width() - 1);
            int py = clamp_coord(static_cast<int>(std::lround(p.y)), 0,
                                 label_map.height() - 1);
            points.push_back(p);
            cluster_of_point.push_back(label_map.at(px, py));
        }

        Correspondence corr =
            correspond_point_clusters(points, cluster_of_point, num_clusters, gt);
        MethodMetrics m = score_correspondence(kMethodRshc, num_clusters, corr);

        OrderedJson rw;
        rw["window"] = window_index;
        rw["first_frame"] = first_frame;
        rw["results"] = OrderedJson::array({metrics_json(m)});
        report["windows"].push_back(std::move(rw));
    }
    return report.dump(2);
}

}  // namespace rshc

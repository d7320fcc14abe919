#include "rshc/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rshc {

namespace {

double sq(double v) { return v * v; }

double sample(const GrayImage& im, int x, int y) {
    return im.at(clamp_coord(x, 0, im.width() - 1), clamp_coord(y, 0, im.height() - 1));
}

// Border-replicating bilinear lookup.
double sample_bilinear(const GrayImage& im, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(im.width() - 1));
    y = std::clamp(y, 0.0, static_cast<double>(im.height() - 1));
    int x0 = static_cast<int>(x);
    int y0 = static_cast<int>(y);
    int x1 = std::min(x0 + 1, im.width() - 1);
    int y1 = std::min(y0 + 1, im.height() - 1);
    double fx = x - x0;
    double fy = y - y0;
    double top = im.at(x0, y0) * (1.0 - fx) + im.at(x1, y0) * fx;
    double bot = im.at(x0, y1) * (1.0 - fx) + im.at(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

double min_eigenvalue(double gxx, double gxy, double gyy) {
    double trace_half = 0.5 * (gxx + gyy);
    double det_term = std::sqrt(sq(0.5 * (gxx - gyy)) + sq(gxy));
    return trace_half - det_term;
}

GrayImage downsample(const GrayImage& in) {
    int w = std::max(1, (in.width() + 1) / 2);
    int h = std::max(1, (in.height() + 1) / 2);
    GrayImage out(w, h);
    constexpr double k[3] = {0.25, 0.5, 0.25};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = -1; j <= 1; ++j) {
                for (int i = -1; i <= 1; ++i) {
                    acc += k[i + 1] * k[j + 1] * sample(in, 2 * x + i, 2 * y + j);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

std::vector<GrayImage> build_pyramid(const GrayImage& base, int levels) {
    std::vector<GrayImage> pyr;
    pyr.push_back(base);
    for (int l = 1; l < levels; ++l) {
        const GrayImage& prev = pyr.back();
        if (std::min(prev.width(), prev.height()) < 8) break;
        pyr.push_back(downsample(prev));
    }
    return pyr;
}

struct StepResult {
    double dx = 0.0;
    double dy = 0.0;
    bool valid = false;
};

StepResult lk_step(const std::vector<GrayImage>& pyr_prev,
                   const std::vector<GrayImage>& pyr_next, double px, double py,
                   const LkParams& params) {
    int levels = static_cast<int>(std::min(pyr_prev.size(), pyr_next.size()));
    int r = params.window_radius;
    int win = 2 * r + 1;
    double win_area = static_cast<double>(win) * win;

    std::vector<double> grad_x(win * win), grad_y(win * win), base_val(win * win);

    double gx = 0.0, gy = 0.0;  // accumulated guess in level coordinates
    bool fine_tensor_ok = true;

    for (int level = levels - 1; level >= 0; --level) {
        const GrayImage& prev = pyr_prev[level];
        const GrayImage& next = pyr_next[level];
        double scale = 1.0 / static_cast<double>(1 << level);
        double cx = px * scale;
        double cy = py * scale;

        double gxx = 0.0, gxy = 0.0, gyy = 0.0;
        int i = 0;
        for (int v = -r; v <= r; ++v) {
            for (int u = -r; u <= r; ++u, ++i) {
                double x = cx + u;
                double y = cy + v;
                double ix = 0.5 * (sample_bilinear(prev, x + 1, y) -
                                   sample_bilinear(prev, x - 1, y));
                double iy = 0.5 * (sample_bilinear(prev, x, y + 1) -
                                   sample_bilinear(prev, x, y - 1));
                grad_x[i] = ix;
                grad_y[i] = iy;
                base_val[i] = sample_bilinear(prev, x, y);
                gxx += ix * ix;
                gxy += ix * iy;
                gyy += iy * iy;
            }
        }
        double det = gxx * gyy - gxy * gxy;
        bool degenerate = min_eigenvalue(gxx, gxy, gyy) / win_area < params.min_eig_threshold ||
                          det <= 0.0;
        if (level == 0) fine_tensor_ok = !degenerate;
        if (degenerate) {
            if (level > 0) {
                gx *= 2.0;
                gy *= 2.0;
            }
            continue;  // keep the coarse guess, refine at finer levels
        }
        double inv_det = 1.0 / det;

        double vx = 0.0, vy = 0.0;
        for (int iter = 0; iter < params.max_iterations; ++iter) {
            double bx = 0.0, by = 0.0;
            i = 0;
            for (int v = -r; v <= r; ++v) {
                for (int u = -r; u <= r; ++u, ++i) {
                    double diff = base_val[i] - sample_bilinear(next, cx + u + gx + vx,
                                                               cy + v + gy + vy);
                    bx += diff * grad_x[i];
                    by += diff * grad_y[i];
                }
            }
            double dvx = (gyy * bx - gxy * by) * inv_det;
            double dvy = (gxx * by - gxy * bx) * inv_det;
            vx += dvx;
            vy += dvy;
            if (std::hypot(dvx, dvy) < params.epsilon) break;
        }
        gx += vx;
        gy += vy;
        if (level > 0) {
            gx *= 2.0;
            gy *= 2.0;
        }
    }

    StepResult res;
    res.dx = gx;
    res.dy = gy;
    if (!fine_tensor_ok) return res;

    // reject tracks that left the frame
    const GrayImage& fine = pyr_next[0];
    double ex = px + gx;
    double ey = py + gy;
    if (ex < 0.0 || ex > fine.width() - 1 || ey < 0.0 || ey > fine.height() - 1) {
        return res;
    }

    // reject poor matches by mean absolute residual
    double residual = 0.0;
    int i = 0;
    for (int v = -r; v <= r; ++v) {
        for (int u = -r; u <= r; ++u, ++i) {
            residual += std::abs(sample_bilinear(pyr_prev[0], px + u, py + v) -
                                 sample_bilinear(fine, px + u + gx, py + v + gy));
        }
    }
    if (residual / win_area > params.max_residual) return res;

    res.valid = true;
    return res;
}

}  // namespace

void DetectorConfig::validate() const {
    if (max_points < 1) {
        throw InvalidParameterError("detector max_points must be >= 1");
    }
    if (!(quality_threshold > 0.0 && quality_threshold <= 1.0)) {
        throw InvalidParameterError("detector quality_threshold must lie in (0, 1]");
    }
    if (min_spacing < 0.0) {
        throw InvalidParameterError("detector min_spacing must be non-negative");
    }
}

void LkParams::validate() const {
    if (pyramid_levels < 1 || window_radius < 1 || max_iterations < 1) {
        throw InvalidParameterError("Lucas-Kanade levels, radius and iterations must be >= 1");
    }
    if (!(epsilon > 0.0) || min_eig_threshold < 0.0 || !(max_residual > 0.0)) {
        throw InvalidParameterError("Lucas-Kanade thresholds out of range");
    }
}

GrayImage saliency_scores(const GrayImage& image) {
    int w = image.width(), h = image.height();
    GrayImage ix(w, h), iy(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            ix.at(x, y) = 0.5 * (sample(image, x + 1, y) - sample(image, x - 1, y));
            iy.at(x, y) = 0.5 * (sample(image, x, y + 1) - sample(image, x, y - 1));
        }
    }
    constexpr int kRadius = 2;  // 5x5 tensor window
    GrayImage score(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gxx = 0.0, gxy = 0.0, gyy = 0.0;
            for (int v = -kRadius; v <= kRadius; ++v) {
                for (int u = -kRadius; u <= kRadius; ++u) {
                    double a = sample(ix, x + u, y + v);
                    double b = sample(iy, x + u, y + v);
                    gxx += a * a;
                    gxy += a * b;
                    gyy += b * b;
                }
            }
            score.at(x, y) = min_eigenvalue(gxx, gxy, gyy);
        }
    }
    return score;
}

std::vector<SalientPoint> detect_salient_points(const GrayImage& image,
                                                const DetectorConfig& cfg) {
    cfg.validate();
    if (image.empty()) {
        throw InvalidInputError("cannot detect points on an empty frame");
    }
    GrayImage score = saliency_scores(image);
    double best = 0.0;
    for (std::size_t i = 0; i < score.size(); ++i) best = std::max(best, score[i]);
    if (best <= 0.0) return {};
    double threshold = cfg.quality_threshold * best;

    struct Candidate {
        double score;
        std::size_t pos;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < score.size(); ++i) {
        if (score[i] > 0.0 && score[i] >= threshold) {
            candidates.push_back({score[i], i});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.pos < b.pos;
    });

    double min_spacing_sq = sq(cfg.min_spacing);
    std::vector<SalientPoint> points;
    for (const Candidate& c : candidates) {
        if (static_cast<int>(points.size()) >= cfg.max_points) break;
        double x = static_cast<double>(c.pos % image.width());
        double y = static_cast<double>(c.pos / image.width());
        bool clear = true;
        for (const SalientPoint& p : points) {
            if (sq(p.x - x) + sq(p.y - y) < min_spacing_sq) {
                clear = false;
                break;
            }
        }
        if (clear) {
            points.push_back({x, y, static_cast<int>(points.size())});
        }
    }
    return points;
}

std::vector<SalientPoint> detect_salient_points(const WeightedLabImage& frame,
                                                const DetectorConfig& cfg) {
    return detect_salient_points(to_grayscale(frame), cfg);
}

FlowTrackSet track_flow(const std::vector<GrayImage>& frames,
                        const std::vector<SalientPoint>& points, const LkParams& params) {
    if (frames.size() < 2) {
        throw InvalidInputError("flow tracking needs at least two frames");
    }
    int w = frames.front().width();
    int h = frames.front().height();
    for (const GrayImage& f : frames) {
        if (f.width() != w || f.height() != h) {
            throw InvalidInputError("flow tracking frames must share dimensions");
        }
    }
    params.validate();

    int steps = static_cast<int>(frames.size()) - 1;
    std::vector<std::vector<GrayImage>> pyramids;
    pyramids.reserve(frames.size());
    for (const GrayImage& f : frames) {
        pyramids.push_back(build_pyramid(f, params.pyramid_levels));
    }

    FlowTrackSet tracks(static_cast<int>(points.size()), steps);
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        double px = points[pi].x;
        double py = points[pi].y;
        bool alive = px >= 0.0 && px <= w - 1 && py >= 0.0 && py <= h - 1;
        for (int t = 0; t < steps; ++t) {
            FlowStep& out = tracks.step(static_cast<int>(pi), t);
            if (!alive) break;  // steps stay invalid once the track dies
            StepResult r = lk_step(pyramids[t], pyramids[t + 1], px, py, params);
            if (!r.valid) {
                alive = false;
                break;
            }
            out.magnitude = std::hypot(r.dx, r.dy);
            out.angle = std::atan2(r.dy, r.dx);
            if (out.angle <= -std::numbers::pi) {
                out.angle = std::numbers::pi;  // keep angles in (-pi, pi]
            }
            out.valid = true;
            px += r.dx;
            py += r.dy;
        }
    }
    return tracks;
}

}  // namespace rshc

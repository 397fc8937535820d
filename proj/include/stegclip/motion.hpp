#pragma once

// Static/dynamic classification of clip pixels.
//
// Every frame t is compared against a partner frame: t+1, or t-1 for the last
// frame. A single-frame clip is entirely static. Three detectors are offered:
// per-pixel gray difference, per-block mean/variance, and per-block color
// histograms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "frame.hpp"

namespace stegclip {

enum class Label : std::uint8_t { Static = 0, Dynamic = 1 };

enum class DetectionMethod : std::uint8_t {
    PixelDiff = 1,
    BlockLikelihood = 2,
    ColorHistogram = 3,
};

inline std::string_view to_string(DetectionMethod m) {
    switch (m) {
    case DetectionMethod::PixelDiff: return "pixel-diff";
    case DetectionMethod::BlockLikelihood: return "block";
    case DetectionMethod::ColorHistogram: return "histogram";
    }
    return "unknown";
}

inline DetectionMethod parse_detection_method(std::string_view name) {
    if (name == "pixel-diff") return DetectionMethod::PixelDiff;
    if (name == "block") return DetectionMethod::BlockLikelihood;
    if (name == "histogram") return DetectionMethod::ColorHistogram;
    throw Error(ErrorCode::InvalidArgument, "unknown detection method '" + std::string(name) + "'");
}

struct AnalysisParams {
    DetectionMethod method = DetectionMethod::PixelDiff;
    int diff_threshold = 2;   // gray levels
    std::size_t block_size = 8;
    double mean_tol = 2.0;    // gray levels
    double var_tol = 4.0;     // gray levels squared
    std::size_t hist_bins = 16;
    double hist_tol = 0.1;    // normalized L1 distance

    void validate() const {
        if (diff_threshold < 0) throw Error(ErrorCode::InvalidArgument, "diff_threshold must be >= 0");
        if (block_size < 1) throw Error(ErrorCode::InvalidArgument, "block_size must be >= 1");
        if (hist_bins < 2 || hist_bins > 256) throw Error(ErrorCode::InvalidArgument, "hist_bins must be in [2,256]");
        if (!(mean_tol >= 0) || !(var_tol >= 0) || !(hist_tol >= 0)) {
            throw Error(ErrorCode::InvalidArgument, "tolerances must be >= 0");
        }
    }
};

// Per-frame, per-pixel labels indexed frame-major then row-major.
class RegionMap {
public:
    RegionMap() = default;
    RegionMap(std::size_t width, std::size_t height, std::size_t frame_count, Label fill = Label::Static)
        : width_(width), height_(height), frame_count_(frame_count), mask_(width * height * frame_count, fill) {}

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t frame_count() const noexcept { return frame_count_; }
    std::size_t pixels_per_frame() const noexcept { return width_ * height_; }
    std::size_t size() const noexcept { return mask_.size(); }

    Label operator[](std::size_t global_pixel) const { return mask_[global_pixel]; }
    Label& operator[](std::size_t global_pixel) { return mask_[global_pixel]; }

    Label at(std::size_t frame, std::size_t x, std::size_t y) const {
        return mask_[frame * pixels_per_frame() + y * width_ + x];
    }
    Label& at(std::size_t frame, std::size_t x, std::size_t y) {
        return mask_[frame * pixels_per_frame() + y * width_ + x];
    }

    std::span<const Label> labels() const noexcept { return mask_; }

    std::size_t count(Label label) const { return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), label)); }

    std::size_t count_in_frame(std::size_t frame, Label label) const {
        const auto begin = mask_.begin() + static_cast<std::ptrdiff_t>(frame * pixels_per_frame());
        return static_cast<std::size_t>(
            std::count(begin, begin + static_cast<std::ptrdiff_t>(pixels_per_frame()), label));
    }

    bool matches(const Clip& clip) const {
        return width_ == clip.width() && height_ == clip.height() && frame_count_ == clip.frame_count();
    }

    bool operator==(const RegionMap&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t frame_count_ = 0;
    std::vector<Label> mask_;
};

// Luma with integer weights 299/587/114 and round-half-up.
inline std::uint8_t gray_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

inline std::vector<std::uint8_t> grayscale(const Frame& frame) {
    std::vector<std::uint8_t> out(frame.pixel_count());
    const auto data = frame.bytes();
    for (std::size_t p = 0; p < out.size(); ++p) {
        out[p] = gray_of(data[p * 3], data[p * 3 + 1], data[p * 3 + 2]);
    }
    return out;
}

namespace motion_detail {

inline std::size_t partner_of(std::size_t t, std::size_t frame_count) {
    return t + 1 < frame_count ? t + 1 : t - 1;
}

struct Block {
    std::size_t x0, y0, x1, y1; // half-open
    std::size_t pixels() const noexcept { return (x1 - x0) * (y1 - y0); }
};

inline std::vector<Block> tile(std::size_t width, std::size_t height, std::size_t block_size) {
    std::vector<Block> blocks;
    for (std::size_t y = 0; y < height; y += block_size) {
        for (std::size_t x = 0; x < width; x += block_size) {
            blocks.push_back({x, y, std::min(x + block_size, width), std::min(y + block_size, height)});
        }
    }
    return blocks;
}

// Labels every frame by a pairwise "is this block/pixel static" predicate
// evaluated on (frame t, partner frame).
template <typename PairLabeler>
RegionMap label_pairs(const Clip& clip, PairLabeler&& label_pair) {
    RegionMap map(clip.width(), clip.height(), clip.frame_count());
    if (clip.frame_count() < 2) {
        return map;
    }
    for (std::size_t t = 0; t < clip.frame_count(); ++t) {
        label_pair(t, partner_of(t, clip.frame_count()), map);
    }
    return map;
}

struct BlockStats {
    std::int64_t sum = 0;
    std::int64_t sum_sq = 0;
};

inline BlockStats block_stats(std::span<const std::uint8_t> gray, std::size_t width, const Block& b) {
    BlockStats s;
    for (std::size_t y = b.y0; y < b.y1; ++y) {
        for (std::size_t x = b.x0; x < b.x1; ++x) {
            const std::int64_t g = gray[y * width + x];
            s.sum += g;
            s.sum_sq += g * g;
        }
    }
    return s;
}

inline void fill_block(RegionMap& map, std::size_t frame, const Block& b, Label label) {
    for (std::size_t y = b.y0; y < b.y1; ++y) {
        for (std::size_t x = b.x0; x < b.x1; ++x) {
            map.at(frame, x, y) = label;
        }
    }
}

} // namespace motion_detail

inline RegionMap pixel_diff_map(const Clip& clip, const AnalysisParams& params) {
    params.validate();
    std::vector<std::vector<std::uint8_t>> gray;
    gray.reserve(clip.frame_count());
    for (const auto& f : clip.frames()) gray.push_back(grayscale(f));

    return motion_detail::label_pairs(clip, [&](std::size_t t, std::size_t u, RegionMap& map) {
        const auto base = t * clip.pixels_per_frame();
        for (std::size_t p = 0; p < clip.pixels_per_frame(); ++p) {
            const int delta = std::abs(int{gray[t][p]} - int{gray[u][p]});
            map[base + p] = delta <= params.diff_threshold ? Label::Static : Label::Dynamic;
        }
    });
}

// Compares block mean and population variance. Both are evaluated on exact
// integer numerators: mean = S/n, var = (n*Q - S^2)/n^2.
inline RegionMap block_likelihood_map(const Clip& clip, const AnalysisParams& params) {
    params.validate();
    using namespace motion_detail;
    std::vector<std::vector<std::uint8_t>> gray;
    gray.reserve(clip.frame_count());
    for (const auto& f : clip.frames()) gray.push_back(grayscale(f));
    const auto blocks = tile(clip.width(), clip.height(), params.block_size);

    return label_pairs(clip, [&](std::size_t t, std::size_t u, RegionMap& map) {
        for (const auto& b : blocks) {
            const auto n = static_cast<std::int64_t>(b.pixels());
            const auto a = block_stats(gray[t], clip.width(), b);
            const auto c = block_stats(gray[u], clip.width(), b);
            const auto mean_gap = static_cast<double>(std::llabs(a.sum - c.sum));
            const auto var_a = n * a.sum_sq - a.sum * a.sum;
            const auto var_c = n * c.sum_sq - c.sum * c.sum;
            const auto var_gap = static_cast<double>(std::llabs(var_a - var_c));
            const auto nd = static_cast<double>(n);
            const bool same = mean_gap <= params.mean_tol * nd && var_gap <= params.var_tol * nd * nd;
            fill_block(map, t, b, same ? Label::Static : Label::Dynamic);
        }
    });
}

inline RegionMap histogram_map(const Clip& clip, const AnalysisParams& params) {
    params.validate();
    using namespace motion_detail;
    const auto blocks = tile(clip.width(), clip.height(), params.block_size);
    const auto bins = params.hist_bins;

    auto histogram = [&](const Frame& f, const Block& b, std::size_t channel, std::vector<std::int64_t>& h) {
        std::fill(h.begin(), h.end(), 0);
        for (std::size_t y = b.y0; y < b.y1; ++y) {
            for (std::size_t x = b.x0; x < b.x1; ++x) {
                ++h[f.at(x, y, channel) * bins / 256];
            }
        }
    };

    std::vector<std::int64_t> ha(bins), hb(bins);
    return label_pairs(clip, [&](std::size_t t, std::size_t u, RegionMap& map) {
        for (const auto& b : blocks) {
            bool same = true;
            for (std::size_t ch = 0; ch < kChannels && same; ++ch) {
                histogram(clip.frame(t), b, ch, ha);
                histogram(clip.frame(u), b, ch, hb);
                std::int64_t l1 = 0;
                for (std::size_t k = 0; k < bins; ++k) l1 += std::llabs(ha[k] - hb[k]);
                const double distance = static_cast<double>(l1) / static_cast<double>(2 * b.pixels());
                same = distance <= params.hist_tol;
            }
            fill_block(map, t, b, same ? Label::Static : Label::Dynamic);
        }
    });
}

inline RegionMap analyze(const Clip& clip, const AnalysisParams& params) {
    switch (params.method) {
    case DetectionMethod::PixelDiff: return pixel_diff_map(clip, params);
    case DetectionMethod::BlockLikelihood: return block_likelihood_map(clip, params);
    case DetectionMethod::ColorHistogram: return histogram_map(clip, params);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown detection method");
}

// Diagnostic P5 mask for one frame: 255 = dynamic, 0 = static.
inline std::vector<std::uint8_t> mask_to_pgm(const RegionMap& map, std::size_t frame) {
    const std::string header =
        "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + map.pixels_per_frame());
    const auto base = frame * map.pixels_per_frame();
    for (std::size_t p = 0; p < map.pixels_per_frame(); ++p) {
        out.push_back(map[base + p] == Label::Dynamic ? 255 : 0);
    }
    return out;
}

} // namespace stegclip

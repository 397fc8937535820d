#pragma once

// Deterministic synthetic clips: a textured static background with a solid
// rectangle that translates by a fixed velocity each frame, wrapping at the
// frame edges.
//
// Background channels lie in [16, 96] and rectangle channels in [200, 255],
// so any pixel the rectangle enters or leaves changes gray level by > 100.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "error.hpp"
#include "frame.hpp"

namespace stegclip {

struct MotionSpec {
    std::size_t block_w = 8;
    std::size_t block_h = 8;
    long long dx = 2;
    long long dy = 0;
};

struct TestClipSpec {
    std::size_t width = 64;
    std::size_t height = 64;
    std::size_t frames = 8;
    MotionSpec motion{};
    std::uint64_t seed = 1;
};

// Rectangle origin in frame t (wrapped into the frame).
inline std::pair<std::size_t, std::size_t> block_origin(const TestClipSpec& spec, std::size_t t,
                                                        std::size_t x0, std::size_t y0) {
    const auto wrap = [](long long v, std::size_t m) {
        const auto mm = static_cast<long long>(m);
        return static_cast<std::size_t>(((v % mm) + mm) % mm);
    };
    return {wrap(static_cast<long long>(x0) + spec.motion.dx * static_cast<long long>(t), spec.width),
            wrap(static_cast<long long>(y0) + spec.motion.dy * static_cast<long long>(t), spec.height)};
}

inline bool in_block(const TestClipSpec& spec, std::size_t ox, std::size_t oy, std::size_t x, std::size_t y) {
    const auto rx = (x + spec.width - ox) % spec.width;
    const auto ry = (y + spec.height - oy) % spec.height;
    return rx < spec.motion.block_w && ry < spec.motion.block_h;
}

struct GeneratedClip {
    Clip clip;
    std::size_t start_x = 0; // rectangle origin in frame 0
    std::size_t start_y = 0;
};

inline GeneratedClip gen_test_clip(const TestClipSpec& spec) {
    if (spec.frames < 1 || spec.motion.block_w < 1 || spec.motion.block_h < 1 || spec.width < spec.motion.block_w ||
        spec.height < spec.motion.block_h) {
        throw Error(ErrorCode::InvalidArgument, "clip must have frames and be at least as large as the block");
    }
    std::mt19937_64 rng(spec.seed);
    // Raw engine output only: std distributions are not portable across standard libraries.
    const auto draw = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };

    Frame background(spec.width, spec.height);
    for (auto& b : background.bytes()) b = static_cast<std::uint8_t>(draw(16, 96));
    const std::uint8_t color[3] = {static_cast<std::uint8_t>(draw(200, 255)), static_cast<std::uint8_t>(draw(200, 255)),
                                   static_cast<std::uint8_t>(draw(200, 255))};
    const auto x0 = static_cast<std::size_t>(draw(0, spec.width - 1));
    const auto y0 = static_cast<std::size_t>(draw(0, spec.height - 1));

    std::vector<Frame> frames;
    frames.reserve(spec.frames);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        Frame f = background;
        const auto [ox, oy] = block_origin(spec, t, x0, y0);
        for (std::size_t y = 0; y < spec.height; ++y) {
            for (std::size_t x = 0; x < spec.width; ++x) {
                if (in_block(spec, ox, oy, x, y)) {
                    for (std::size_t c = 0; c < kChannels; ++c) f.at(x, y, c) = color[c];
                }
            }
        }
        frames.push_back(std::move(f));
    }
    return {Clip(std::move(frames)), x0, y0};
}

} // namespace stegclip

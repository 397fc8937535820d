#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace stegclip {

inline constexpr std::size_t kChannels = 3;

// One RGB8 image, rows top-to-bottom, channels R,G,B, no padding.
class Frame {
public:
    Frame() = default;

    Frame(std::size_t width, std::size_t height)
        : width_(width), height_(height), data_(checked_size(width, height), 0) {}

    Frame(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != checked_size(width, height)) {
            throw Error(ErrorCode::DimensionMismatch,
                        "frame data holds " + std::to_string(data_.size()) + " bytes, expected " +
                            std::to_string(width * height * kChannels));
        }
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    std::size_t byte_count() const noexcept { return data_.size(); }

    std::span<const std::uint8_t> bytes() const noexcept { return data_; }
    std::span<std::uint8_t> bytes() noexcept { return data_; }

    std::uint8_t at(std::size_t x, std::size_t y, std::size_t channel) const {
        return data_[(y * width_ + x) * kChannels + channel];
    }
    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t channel) {
        return data_[(y * width_ + x) * kChannels + channel];
    }

    bool operator==(const Frame&) const = default;

private:
    static std::size_t checked_size(std::size_t width, std::size_t height) {
        if (width == 0 || height == 0) {
            throw Error(ErrorCode::DimensionMismatch, "frame dimensions must be at least 1x1");
        }
        return width * height * kChannels;
    }

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> data_;
};

// Frames per second as a reduced positive fraction.
struct FrameRate {
    std::uint32_t num = 30;
    std::uint32_t den = 1;

    static FrameRate make(std::uint32_t num, std::uint32_t den) {
        if (num == 0 || den == 0) {
            throw Error(ErrorCode::InvalidArgument, "frame rate must be a positive fraction");
        }
        const auto g = std::gcd(num, den);
        return FrameRate{num / g, den / g};
    }

    double value() const noexcept { return static_cast<double>(num) / den; }

    bool operator==(const FrameRate&) const = default;
};

// The carrier: a non-empty sequence of equally sized frames.
class Clip {
public:
    Clip() = default;

    explicit Clip(std::vector<Frame> frames, FrameRate fps = {}) : frames_(std::move(frames)), fps_(fps) {
        if (frames_.empty()) {
            throw Error(ErrorCode::InvalidArgument, "clip must contain at least one frame");
        }
        for (const auto& f : frames_) {
            if (f.width() != frames_.front().width() || f.height() != frames_.front().height()) {
                throw Error(ErrorCode::DimensionMismatch,
                            "frame " + std::to_string(f.width()) + "x" + std::to_string(f.height()) +
                                " does not match clip size " + std::to_string(width()) + "x" +
                                std::to_string(height()));
            }
        }
    }

    std::size_t width() const noexcept { return frames_.empty() ? 0 : frames_.front().width(); }
    std::size_t height() const noexcept { return frames_.empty() ? 0 : frames_.front().height(); }
    std::size_t frame_count() const noexcept { return frames_.size(); }
    std::size_t pixels_per_frame() const noexcept { return width() * height(); }
    std::size_t total_pixels() const noexcept { return pixels_per_frame() * frame_count(); }
    std::size_t total_bytes() const noexcept { return total_pixels() * kChannels; }

    FrameRate fps() const noexcept { return fps_; }
    void set_fps(FrameRate fps) noexcept { fps_ = fps; }

    const std::vector<Frame>& frames() const noexcept { return frames_; }
    const Frame& frame(std::size_t i) const { return frames_.at(i); }
    Frame& frame(std::size_t i) { return frames_.at(i); }

    // Clip-global byte addressing: frame-major, then row-major, then R,G,B.
    std::uint8_t byte_at(std::size_t global) const {
        const auto per = pixels_per_frame() * kChannels;
        return frames_[global / per].bytes()[global % per];
    }
    std::uint8_t& byte_at(std::size_t global) {
        const auto per = pixels_per_frame() * kChannels;
        return frames_[global / per].bytes()[global % per];
    }

    bool operator==(const Clip&) const = default;

private:
    std::vector<Frame> frames_;
    FrameRate fps_{};
};

} // namespace stegclip

#pragma once

// Binary PPM (P6, maxval 255) frames and numbered frame directories.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "file_util.hpp"
#include "frame.hpp"

namespace stegclip {

namespace detail {

class PnmHeaderReader {
public:
    explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then parses one unsigned decimal token.
    std::size_t next_number(const char* what) {
        skip_space_and_comments();
        const auto start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            const std::size_t digit = bytes_[pos_] - '0';
            if (value > (std::numeric_limits<std::uint32_t>::max() - digit) / 10) {
                throw Error(ErrorCode::MalformedHeader, std::string(what) + " is too large");
            }
            value = value * 10 + digit;
            ++pos_;
        }
        if (pos_ == start) {
            throw Error(ErrorCode::MalformedHeader, std::string("expected ") + what);
        }
        return value;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw Error(ErrorCode::MalformedHeader, "missing whitespace after maxval");
        }
        ++pos_;
    }

    std::size_t position() const noexcept { return pos_; }
    void advance(std::size_t n) noexcept { pos_ += n; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Frame read_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
        throw Error(ErrorCode::MalformedHeader, "missing P6 magic");
    }
    detail::PnmHeaderReader reader(bytes);
    reader.advance(2);
    const auto width = reader.next_number("width");
    const auto height = reader.next_number("height");
    const auto maxval = reader.next_number("maxval");
    if (width == 0 || height == 0) {
        throw Error(ErrorCode::MalformedHeader, "zero image dimension");
    }
    if (maxval != 255) {
        throw Error(ErrorCode::UnsupportedMaxval, "maxval " + std::to_string(maxval) + " (only 255 is supported)");
    }
    reader.single_whitespace();

    const auto offset = reader.position();
    const auto available = bytes.size() - offset;
    if (width * height > available) {
        throw Error(ErrorCode::TruncatedData, "raster shorter than " + std::to_string(width) + "x" +
                                                  std::to_string(height) + " pixels");
    }
    const auto need = width * height * kChannels;
    if (available < need) {
        throw Error(ErrorCode::TruncatedData, "raster has " + std::to_string(bytes.size() - offset) +
                                                  " bytes, expected " + std::to_string(need));
    }
    return Frame(width, height, std::vector<std::uint8_t>(bytes.begin() + offset, bytes.begin() + offset + need));
}

inline std::vector<std::uint8_t> write_ppm(const Frame& frame) {
    const std::string header =
        "P6\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + frame.byte_count());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), frame.bytes().begin(), frame.bytes().end());
    return out;
}

// "frame_000001.ppm" style names, 1-based.
inline std::string numbered_name(std::string_view stem, std::size_t index, std::string_view ext) {
    char digits[32];
    std::snprintf(digits, sizeof(digits), "%06zu", index);
    return std::string(stem) + "_" + digits + std::string(ext);
}

// All *.ppm files in a directory, sorted by name.
inline std::vector<std::filesystem::path> list_frame_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw Error(ErrorCode::Io, dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    if (paths.empty()) {
        throw Error(ErrorCode::Io, "no .ppm frames in " + dir.string());
    }
    return paths;
}

inline Clip read_frame_dir(std::span<const std::filesystem::path> paths, FrameRate fps = {}) {
    std::vector<Frame> frames;
    frames.reserve(paths.size());
    for (const auto& p : paths) {
        frames.push_back(read_ppm(read_file(p)));
    }
    return Clip(std::move(frames), fps);
}

inline std::vector<std::filesystem::path> write_frame_dir(const Clip& clip, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    written.reserve(clip.frame_count());
    for (std::size_t i = 0; i < clip.frame_count(); ++i) {
        auto path = dir / numbered_name("frame", i + 1, ".ppm");
        write_file(path, write_ppm(clip.frame(i)));
        written.push_back(std::move(path));
    }
    return written;
}

} // namespace stegclip

#pragma once

// Minimal RIFF/AVI container for uncompressed 24-bit DIB video.
//
// Layout produced by write_avi (all integers little-endian):
//   RIFF 'AVI '
//     LIST 'hdrl'
//       'avih' (56 bytes)
//       LIST 'strl'
//         'strh' (56 bytes, fccType 'vids', handler 'DIB ')
//         'strf' (40-byte BITMAPINFOHEADER, 24 bpp, BI_RGB)
//     LIST 'movi'
//       '00db' per frame: bottom-up rows, B,G,R, each row padded to 4 bytes
//     'idx1' (16 bytes per frame, offsets relative to the 'movi' fourcc)

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "frame.hpp"

namespace stegclip {

namespace avi_detail {

using FourCC = std::array<char, 4>;

constexpr FourCC fourcc(const char (&s)[5]) { return {s[0], s[1], s[2], s[3]}; }

inline std::string to_string(const FourCC& cc) { return std::string(cc.data(), cc.size()); }

inline std::size_t dib_stride(std::size_t width) { return (width * 3 + 3) & ~std::size_t{3}; }

class ByteWriter {
public:
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v));
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int shift = 0; shift < 32; shift += 8) {
            out_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void tag(const FourCC& cc) { out_.insert(out_.end(), cc.begin(), cc.end()); }
    void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }
    void raw(std::span<const std::uint8_t> bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }

    std::size_t size() const noexcept { return out_.size(); }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

inline std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

inline FourCC get_tag(std::span<const std::uint8_t> b, std::size_t at) {
    return {static_cast<char>(b[at]), static_cast<char>(b[at + 1]), static_cast<char>(b[at + 2]),
            static_cast<char>(b[at + 3])};
}

struct Chunk {
    FourCC id;
    std::span<const std::uint8_t> data;
};

// Splits a byte range into RIFF chunks (id, size, payload, pad-to-even).
inline std::vector<Chunk> split_chunks(std::span<const std::uint8_t> region) {
    std::vector<Chunk> chunks;
    std::size_t pos = 0;
    while (pos + 8 <= region.size()) {
        const auto id = get_tag(region, pos);
        const std::size_t size = get_u32(region, pos + 4);
        if (size > region.size() - pos - 8) {
            throw Error(ErrorCode::TruncatedChunk, "chunk '" + to_string(id) + "' declares " + std::to_string(size) +
                                                       " bytes but only " + std::to_string(region.size() - pos - 8) +
                                                       " remain");
        }
        chunks.push_back({id, region.subspan(pos + 8, size)});
        pos += 8 + size + (size & 1);
    }
    // A lone trailing pad byte is tolerated; anything longer is a cut-off chunk header.
    if (pos < region.size() && region.size() - pos > 1) {
        throw Error(ErrorCode::TruncatedChunk, "dangling bytes after last chunk");
    }
    return chunks;
}

inline bool is_list(const Chunk& c, const FourCC& type) {
    return c.id == fourcc("LIST") && c.data.size() >= 4 && get_tag(c.data, 0) == type;
}

// Converts a DIB chunk to a top-down RGB frame. A negative DIB height means top-down rows.
inline Frame dib_to_frame(std::span<const std::uint8_t> dib, std::size_t width, std::size_t height, bool bottom_up) {
    const auto stride = dib_stride(width);
    Frame frame(width, height);
    auto out = frame.bytes();
    for (std::size_t row = 0; row < height; ++row) {
        const auto src_row = bottom_up ? height - 1 - row : row;
        const auto* src = dib.data() + src_row * stride;
        auto* dst = out.data() + row * width * 3;
        for (std::size_t x = 0; x < width; ++x) {
            dst[x * 3 + 0] = src[x * 3 + 2];
            dst[x * 3 + 1] = src[x * 3 + 1];
            dst[x * 3 + 2] = src[x * 3 + 0];
        }
    }
    return frame;
}

inline void append_dib(ByteWriter& w, const Frame& frame) {
    const auto width = frame.width();
    const auto pad = dib_stride(width) - width * 3;
    const auto data = frame.bytes();
    for (std::size_t row = frame.height(); row-- > 0;) {
        const auto* src = data.data() + row * width * 3;
        for (std::size_t x = 0; x < width; ++x) {
            const std::array<std::uint8_t, 3> bgr{src[x * 3 + 2], src[x * 3 + 1], src[x * 3 + 0]};
            w.raw(bgr);
        }
        w.zeros(pad);
    }
}

} // namespace avi_detail

// Flips row order and swaps R/B; applying it twice restores the input.
inline std::vector<std::uint8_t> flip_rows_swap_rb(std::span<const std::uint8_t> rows, std::size_t width,
                                                   std::size_t height) {
    const auto stride = avi_detail::dib_stride(width);
    std::vector<std::uint8_t> out(rows.size(), 0);
    for (std::size_t row = 0; row < height; ++row) {
        const auto* src = rows.data() + row * stride;
        auto* dst = out.data() + (height - 1 - row) * stride;
        for (std::size_t x = 0; x < width; ++x) {
            dst[x * 3 + 0] = src[x * 3 + 2];
            dst[x * 3 + 1] = src[x * 3 + 1];
            dst[x * 3 + 2] = src[x * 3 + 0];
        }
        std::memcpy(dst + width * 3, src + width * 3, stride - width * 3);
    }
    return out;
}

inline std::vector<std::uint8_t> write_avi(const Clip& clip) {
    using namespace avi_detail;
    const auto width = static_cast<std::uint32_t>(clip.width());
    const auto height = static_cast<std::uint32_t>(clip.height());
    const auto frames = static_cast<std::uint32_t>(clip.frame_count());
    const auto frame_size = static_cast<std::uint32_t>(dib_stride(width) * height);
    const auto fps = clip.fps();
    const auto us_per_frame =
        static_cast<std::uint32_t>(std::llround(1'000'000.0 * fps.den / static_cast<double>(fps.num)));

    const std::uint32_t avih_size = 56, strh_size = 56, strf_size = 40;
    const std::uint32_t strl_size = 4 + (8 + strh_size) + (8 + strf_size);
    const std::uint32_t hdrl_size = 4 + (8 + avih_size) + (8 + strl_size);
    const std::uint32_t movi_size = 4 + frames * (8 + frame_size);
    const std::uint32_t idx1_size = 16 * frames;
    const std::uint32_t riff_size = 4 + (8 + hdrl_size) + (8 + movi_size) + (8 + idx1_size);

    ByteWriter w;
    w.tag(fourcc("RIFF"));
    w.u32(riff_size);
    w.tag(fourcc("AVI "));

    w.tag(fourcc("LIST"));
    w.u32(hdrl_size);
    w.tag(fourcc("hdrl"));

    w.tag(fourcc("avih"));
    w.u32(avih_size);
    w.u32(us_per_frame);
    w.u32(static_cast<std::uint32_t>(
        std::llround(static_cast<double>(frame_size) * fps.num / static_cast<double>(fps.den))));
    w.u32(0);    // padding granularity
    w.u32(0x10); // AVIF_HASINDEX
    w.u32(frames);
    w.u32(0); // initial frames
    w.u32(1); // streams
    w.u32(frame_size);
    w.u32(width);
    w.u32(height);
    w.zeros(16);

    w.tag(fourcc("LIST"));
    w.u32(strl_size);
    w.tag(fourcc("strl"));

    w.tag(fourcc("strh"));
    w.u32(strh_size);
    w.tag(fourcc("vids"));
    w.tag(fourcc("DIB "));
    w.u32(0); // flags
    w.u16(0); // priority
    w.u16(0); // language
    w.u32(0); // initial frames
    w.u32(fps.den);
    w.u32(fps.num);
    w.u32(0); // start
    w.u32(frames);
    w.u32(frame_size);
    w.u32(0xFFFFFFFFu); // quality: default
    w.u32(0);           // sample size
    w.u16(0);
    w.u16(0);
    w.u16(static_cast<std::uint16_t>(width));
    w.u16(static_cast<std::uint16_t>(height));

    w.tag(fourcc("strf"));
    w.u32(strf_size);
    w.u32(40);
    w.i32(static_cast<std::int32_t>(width));
    w.i32(static_cast<std::int32_t>(height)); // positive: bottom-up
    w.u16(1);
    w.u16(24);
    w.u32(0); // BI_RGB
    w.u32(frame_size);
    w.zeros(16);

    w.tag(fourcc("LIST"));
    w.u32(movi_size);
    w.tag(fourcc("movi"));
    for (const auto& frame : clip.frames()) {
        w.tag(fourcc("00db"));
        w.u32(frame_size);
        append_dib(w, frame);
    }

    w.tag(fourcc("idx1"));
    w.u32(idx1_size);
    for (std::uint32_t i = 0; i < frames; ++i) {
        w.tag(fourcc("00db"));
        w.u32(0x10); // AVIIF_KEYFRAME
        w.u32(4 + i * (8 + frame_size));
        w.u32(frame_size);
    }
    return w.take();
}

inline Clip read_avi(std::span<const std::uint8_t> bytes) {
    using namespace avi_detail;
    if (bytes.size() < 12 || get_tag(bytes, 0) != fourcc("RIFF")) {
        throw Error(ErrorCode::NotRiff, "missing RIFF signature");
    }
    if (get_tag(bytes, 8) != fourcc("AVI ")) {
        throw Error(ErrorCode::NotRiff, "RIFF form type '" + to_string(get_tag(bytes, 8)) + "' is not 'AVI '");
    }
    const std::size_t riff_size = get_u32(bytes, 4);
    if (riff_size < 4 || riff_size > bytes.size() - 8) {
        throw Error(ErrorCode::TruncatedChunk, "RIFF declares " + std::to_string(riff_size) + " bytes but file has " +
                                                   std::to_string(bytes.size() - 8));
    }

    std::optional<Chunk> avih;
    std::vector<Chunk> strls;
    std::vector<std::span<const std::uint8_t>> frame_chunks;
    bool saw_hdrl = false;

    for (const auto& top : split_chunks(bytes.subspan(12, riff_size - 4))) {
        if (is_list(top, fourcc("hdrl"))) {
            saw_hdrl = true;
            for (const auto& c : split_chunks(top.data.subspan(4))) {
                if (c.id == fourcc("avih")) {
                    avih = c;
                } else if (is_list(c, fourcc("strl"))) {
                    strls.push_back(c);
                }
            }
        } else if (is_list(top, fourcc("movi"))) {
            for (const auto& c : split_chunks(top.data.subspan(4))) {
                if (c.id == fourcc("00db") || c.id == fourcc("00dc")) {
                    frame_chunks.push_back(c.data);
                } else if (is_list(c, fourcc("rec "))) {
                    for (const auto& r : split_chunks(c.data.subspan(4))) {
                        if (r.id == fourcc("00db") || r.id == fourcc("00dc")) {
                            frame_chunks.push_back(r.data);
                        }
                    }
                }
            }
        }
    }

    if (!saw_hdrl || !avih || avih->data.size() < 40) {
        throw Error(ErrorCode::MalformedHeader, "missing or short 'avih' header");
    }
    if (strls.size() != 1) {
        throw Error(ErrorCode::UnsupportedCodec, "expected exactly one stream, found " + std::to_string(strls.size()));
    }

    std::optional<Chunk> strh, strf;
    for (const auto& c : split_chunks(strls.front().data.subspan(4))) {
        if (c.id == fourcc("strh")) {
            strh = c;
        } else if (c.id == fourcc("strf")) {
            strf = c;
        }
    }
    if (!strh || strh->data.size() < 28 || !strf || strf->data.size() < 20) {
        throw Error(ErrorCode::MalformedHeader, "missing or short stream header");
    }
    if (get_tag(strh->data, 0) != fourcc("vids")) {
        throw Error(ErrorCode::UnsupportedCodec, "stream type '" + to_string(get_tag(strh->data, 0)) + "' is not video");
    }
    const auto bit_count = get_u16(strf->data, 14);
    const auto compression = get_u32(strf->data, 16);
    if (compression != 0 || bit_count != 24) {
        throw Error(ErrorCode::UnsupportedCodec, "compression " + std::to_string(compression) + ", " +
                                                     std::to_string(bit_count) + " bpp (need uncompressed 24 bpp)");
    }
    const auto dib_width = static_cast<std::int32_t>(get_u32(strf->data, 4));
    const auto dib_height = static_cast<std::int32_t>(get_u32(strf->data, 8));
    if (dib_width <= 0 || dib_height == 0) {
        throw Error(ErrorCode::MalformedHeader, "invalid DIB dimensions");
    }
    const auto width = static_cast<std::size_t>(dib_width);
    const bool bottom_up = dib_height > 0;
    const auto height = static_cast<std::size_t>(bottom_up ? dib_height : -static_cast<std::int64_t>(dib_height));
    const auto frame_size = dib_stride(width) * height;

    if (frame_chunks.empty()) {
        throw Error(ErrorCode::MalformedHeader, "'movi' list holds no video frames");
    }
    std::vector<Frame> frames;
    frames.reserve(frame_chunks.size());
    for (const auto& data : frame_chunks) {
        if (data.size() != frame_size) {
            throw Error(ErrorCode::DimensionMismatch, "frame chunk of " + std::to_string(data.size()) +
                                                          " bytes, expected " + std::to_string(frame_size));
        }
        frames.push_back(dib_to_frame(data, width, height, bottom_up));
    }

    FrameRate fps{};
    const auto scale = get_u32(strh->data, 20);
    const auto rate = get_u32(strh->data, 24);
    const auto us_per_frame = get_u32(avih->data, 0);
    if (scale != 0 && rate != 0) {
        fps = FrameRate::make(rate, scale);
    } else if (us_per_frame != 0) {
        fps = FrameRate::make(1'000'000, us_per_frame);
    }
    return Clip(std::move(frames), fps);
}

} // namespace stegclip

#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace stegclip {

namespace crc_detail {

constexpr std::array<std::uint32_t, 256> make_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t n = 0; n < 256; ++n) {
        std::uint32_t c = n;
        for (int k = 0; k < 8; ++k) {
            c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        }
        table[n] = c;
    }
    return table;
}

inline constexpr auto kTable = make_table();

} // namespace crc_detail

// Incremental CRC-32 (reflected 0xEDB88320, init and final XOR 0xFFFFFFFF).
class Crc32 {
public:
    Crc32& update(std::span<const std::uint8_t> data) noexcept {
        for (const auto b : data) {
            state_ = crc_detail::kTable[(state_ ^ b) & 0xFF] ^ (state_ >> 8);
        }
        return *this;
    }

    std::uint32_t value() const noexcept { return state_ ^ 0xFFFFFFFFu; }

private:
    std::uint32_t state_ = 0xFFFFFFFFu;
};

inline std::uint32_t crc32(std::span<const std::uint8_t> data) noexcept { return Crc32{}.update(data).value(); }

} // namespace stegclip

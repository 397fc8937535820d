#pragma once

// Stego-key handling: the key picks the arithmetic-progression parameters used
// to address static pixels and seeds the keystreams that mask header and
// payload bytes. This is obfuscation with a bit-exact definition, not
// encryption.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace stegclip {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

// FNV-1a, 64-bit.
inline std::uint64_t hash_key(std::span<const std::uint8_t> key) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto b : key) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

struct KeyMaterial {
    std::uint64_t digest = 0;
    std::uint64_t start_i = 5; // 1-based first static slot
    std::uint64_t step_d = 3;  // distance between static slots
    std::uint64_t header_seed = 0;
    std::uint64_t static_seed = 0;
    std::uint64_t dynamic_seed = 0;

    bool operator==(const KeyMaterial&) const = default;
};

inline constexpr std::uint64_t kDefaultStartI = 5;
inline constexpr std::uint64_t kDefaultStepD = 3;

inline KeyMaterial derive_key_material(const std::optional<Bytes>& key) {
    constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    const auto nonzero = [](std::uint64_t s) { return s == 0 ? kGolden : s; };

    KeyMaterial km;
    // Without a key the digest is that of the empty string; only the
    // progression falls back to (5, 3).
    km.digest = key ? hash_key(*key) : hash_key({});
    if (key) {
        km.start_i = 1 + (km.digest % 64);
        km.step_d = 1 + ((km.digest / 256) % 8);
    } else {
        km.start_i = kDefaultStartI;
        km.step_d = kDefaultStepD;
    }
    km.header_seed = nonzero(km.digest ^ 0x5851F42D4C957F2Dull);
    km.static_seed = km.digest == 0 ? 1 : km.digest;
    km.dynamic_seed = nonzero(km.digest ^ 0xA5A5A5A5A5A5A5A5ull);
    return km;
}

inline KeyMaterial derive_key_material(std::string_view key) { return derive_key_material(to_bytes(key)); }

// xorshift64* emitting the top byte of each product.
class Keystream {
public:
    explicit Keystream(std::uint64_t seed) : state_(seed) {
        if (seed == 0) {
            throw Error(ErrorCode::SeedZero, "keystream seed must be nonzero");
        }
    }

    std::uint8_t next() noexcept {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return static_cast<std::uint8_t>((state_ * 0x2545F4914F6CDD1Dull) >> 56);
    }

    // XORs the next |data| keystream bytes into data.
    void apply(std::span<std::uint8_t> data) noexcept {
        for (auto& b : data) b ^= next();
    }

private:
    std::uint64_t state_;
};

inline Bytes keystream(std::uint64_t seed, std::size_t n) {
    Keystream ks(seed);
    Bytes out(n);
    for (auto& b : out) b = ks.next();
    return out;
}

inline Bytes mask(std::span<const std::uint8_t> data, std::uint64_t seed) {
    Bytes out(data.begin(), data.end());
    Keystream(seed).apply(out);
    return out;
}

} // namespace stegclip

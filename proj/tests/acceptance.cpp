// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "stegclip/stegclip.hpp"
#include "test_support.hpp"

using namespace stegclip;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
    std::printf("[%s] %s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    if (!ok) ++failures;
}

constexpr DetectionMethod kMethods[] = {DetectionMethod::PixelDiff, DetectionMethod::BlockLikelihood,
                                        DetectionMethod::ColorHistogram};

Clip moving_clip(std::mt19937_64& rng, std::size_t w, std::size_t h, std::size_t n) {
    TestClipSpec spec;
    spec.width = w;
    spec.height = h;
    spec.frames = n;
    spec.motion.block_w = 1 + rng() % std::max<std::size_t>(1, w / 3);
    spec.motion.block_h = 1 + rng() % std::max<std::size_t>(1, h / 3);
    spec.motion.dx = static_cast<long long>(rng() % 5) - 2;
    spec.motion.dy = static_cast<long long>(rng() % 5) - 2;
    spec.seed = rng();
    return gen_test_clip(spec).clip;
}

// Static pixels outside the reserved prefix, enumerated straight from the map.
std::vector<std::uint64_t> usable_static_pixels(const RegionMap& map, std::uint64_t reserved_pixels) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = reserved_pixels; p < map.size(); ++p) {
        if (map[p] == Label::Static) out.push_back(p);
    }
    return out;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

void ac1_round_trip() {
    std::mt19937_64 rng(1001);
    const auto t0 = std::chrono::steady_clock::now();
    int cases = 0, exact = 0, attempts = 0;
    std::set<DetectionMethod> methods_seen;
    while (cases < 240 && attempts < 2000) {
        ++attempts;
        const std::size_t w = 8 + rng() % 57, h = 8 + rng() % 57, n = 2 + rng() % 15;
        const auto clip = rng() % 2 ? moving_clip(rng, w, h, n) : testing::mixed_clip(rng, w, h, n);
        AnalysisParams params;
        params.method = kMethods[attempts % 3];
        const auto key = testing::random_bytes(rng, 1 + rng() % 16);
        CapacityReport cap;
        try {
            cap = capacity(clip, params, key);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ClipTooSmall) continue; // region map too long for this clip
            throw;
        }
        const auto s_max = cap.capacity_static_bytes * 9 / 10;
        const auto d_max = cap.capacity_dynamic_bytes() * 9 / 10;
        const auto s = testing::random_bytes(rng, s_max ? rng() % (s_max + 1) : 0);
        const auto d = testing::random_bytes(rng, d_max ? rng() % (d_max + 1) : 0);
        if (s.empty() && d.empty()) continue;
        ++cases;
        methods_seen.insert(params.method);
        try {
            const auto stego = embed(clip, params, s, d, key).stego;
            const auto out = extract(stego, key);
            if (out.static_payload == s && out.dynamic_payload == d) ++exact;
        } catch (const Error& e) {
            std::printf("  case %d: %s\n", cases, e.what());
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "round-trip exactness: %d/%d cases byte-identical, %zu methods, %.1f s", exact,
                  cases, methods_seen.size(), secs);
    report("AC1", cases >= 200 && exact == cases && methods_seen.size() == 3 && secs < 60, buf);
}

void ac2_progression_positions() {
    // Fully static two-frame clip, no key, so i = 5 and d = 3.
    std::mt19937_64 rng(1002);
    const auto f = testing::random_frame(rng, 20, 20);
    const Clip clip({f, f});
    const Bytes payload = to_bytes("ABCDEFGHI");
    const auto result = embed(clip, {}, payload, std::nullopt);
    const auto km = derive_key_material(std::nullopt);

    const auto map = analyze(clip, {});
    const auto map_len = encode_region_map(map).size();
    const auto usable = usable_static_pixels(map, ceil_div(8 * (23 + map_len), 3));
    const auto masked = mask(payload, km.static_seed);

    bool ok = result.report.static_positions == std::vector<std::uint64_t>{5, 8, 11};
    const std::uint64_t expected_positions[] = {5, 8, 11};
    for (std::size_t j = 0; j < 3; ++j) {
        const auto pixel = usable[expected_positions[j] - 1];
        ok = ok && result.report.static_pixels[j] == pixel;
        for (std::size_t c = 0; c < 3; ++c) ok = ok && result.stego.byte_at(3 * pixel + c) == masked[3 * j + c];
    }
    // No other static pixel outside the header reserve was touched.
    for (std::size_t k = 0; k < usable.size(); ++k) {
        if (k + 1 == 5 || k + 1 == 8 || k + 1 == 11) continue;
        for (std::size_t c = 0; c < 3; ++c) ok = ok && result.stego.byte_at(3 * usable[k] + c) == clip.byte_at(3 * usable[k] + c);
    }
    report("AC2", ok, "default progression: first three triplets at static positions 5, 8, 11");
}

void ac3_capacity() {
    auto km = derive_key_material(std::nullopt);
    km.start_i = 1;
    km.step_d = 1;
    const auto formula = [](std::uint64_t ns, std::uint64_t i, std::uint64_t d) -> std::uint64_t {
        return ns < i ? 0 : 3 * ((ns - i) / d + 1);
    };

    const auto small = capacity_from(RegionMap(10, 10, 1), DetectionMethod::PixelDiff, km);
    const bool a = small.gross_static_bytes == 300 && small.gross_static_bytes == formula(100, 1, 1) &&
                   small.capacity_static_bytes == formula(100 - small.reserved_pixels, 1, 1);

    const auto big = capacity(Clip({Frame(800, 600)}), {}, km);
    const auto ns = 480000 - big.reserved_pixels;
    const bool b = big.gross_static_bytes == 1'440'000 && big.capacity_static_bytes == formula(ns, 1, 1) &&
                   big.capacity_static_bytes > 20ull * 60'000;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "capacity: 10x10 gross=%llu (want 300); 800x600 net=%llu = 3*(%llu-1+1), %.1fx of 60 kB",
                  static_cast<unsigned long long>(small.gross_static_bytes),
                  static_cast<unsigned long long>(big.capacity_static_bytes), static_cast<unsigned long long>(ns),
                  static_cast<double>(big.capacity_static_bytes) / 60'000.0);
    report("AC3", a && b, buf);
}

void ac4_distortion() {
    const double bound = 10.0 * std::log10(255.0 * 255.0 / 1.0);
    bool ok = std::fabs(psnr(1.0) - bound) <= 1e-3 && std::fabs(bound - 48.13) <= 1e-3;
    std::mt19937_64 rng(1004);
    double worst = std::numeric_limits<double>::infinity();
    std::uint64_t changed = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const auto clip = testing::random_clip(rng, 16 + rng() % 32, 16 + rng() % 32, 2 + rng() % 4);
        AnalysisParams params;
        params.method = kMethods[trial % 3];
        const auto key = testing::random_bytes(rng, 8);
        const auto cap = capacity(clip, params, key);
        const auto result = embed(clip, params, std::nullopt, testing::random_bytes(rng, cap.capacity_dynamic_bytes()), key);
        for (std::size_t b = 0; b < clip.total_bytes(); ++b) {
            const int d = std::abs(result.stego.byte_at(b) - clip.byte_at(b));
            if (d != 0) ++changed;
            ok = ok && (d == 0 || d == 1);
        }
        for (const double p : compare(clip, result.stego).per_frame_psnr) {
            worst = std::min(worst, p);
            ok = ok && p >= bound;
        }
        ok = ok && cap.capacity_dynamic_bytes() > 0;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "distortion: %llu changed bytes all |delta|=1, worst frame PSNR %.4f dB >= %.4f",
                  static_cast<unsigned long long>(changed), worst, bound);
    report("AC4", ok, buf);
}

void ac5_locality() {
    std::mt19937_64 rng(1005);
    int trials = 0, clean = 0;
    while (trials < 100) {
        const std::size_t w = 8 + rng() % 40, h = 8 + rng() % 40, n = 2 + rng() % 5;
        const auto clip = rng() % 2 ? moving_clip(rng, w, h, n) : testing::mixed_clip(rng, w, h, n);
        AnalysisParams params;
        params.method = kMethods[trials % 3];
        const auto key = testing::random_bytes(rng, 6);
        CapacityReport cap;
        try {
            cap = capacity(clip, params, key);
        } catch (const Error&) {
            continue;
        }
        const auto s = testing::random_bytes(rng, rng() % (cap.capacity_static_bytes + 1));
        const auto d = testing::random_bytes(rng, rng() % (cap.capacity_dynamic_bytes() + 1));
        if (s.empty() && d.empty()) continue;
        ++trials;
        const auto stego = embed(clip, params, s, d, key).stego;

        // Allowed bytes, rebuilt from the map and key without the planner.
        const auto map = analyze(clip, params);
        const auto km = derive_key_material(key);
        const auto header_bits = 8 * (23 + encode_region_map(map).size());
        const auto reserved_pixels = ceil_div(header_bits, 3);
        std::set<std::uint64_t> allowed;
        for (std::uint64_t b = 0; b < header_bits; ++b) allowed.insert(b);
        const auto statics = usable_static_pixels(map, reserved_pixels);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const auto pos = km.start_i + (k / 3) * km.step_d; // 1-based
            allowed.insert(3 * statics[pos - 1] + k % 3);
        }
        std::uint64_t used = 0;
        for (std::uint64_t p = reserved_pixels; p < map.size() && used < 8 * d.size(); ++p) {
            if (map[p] != Label::Dynamic) continue;
            for (std::size_t c = 0; c < 3 && used < 8 * d.size(); ++c, ++used) allowed.insert(3 * p + c);
        }
        bool ok = true;
        for (std::size_t b = 0; b < clip.total_bytes(); ++b) {
            if (!allowed.count(b) && stego.byte_at(b) != clip.byte_at(b)) ok = false;
        }
        if (ok) ++clean;
    }
    report("AC5", clean == trials, "locality: " + std::to_string(clean) + "/" + std::to_string(trials) +
                                       " trials change only header, selected static and used dynamic bytes");
}

void ac6_wrong_key() {
    std::mt19937_64 rng(1006);
    int detected = 0, pairs = 0;
    while (pairs < 100) {
        const auto k1 = testing::random_bytes(rng, 1 + rng() % 12);
        const auto k2 = testing::random_bytes(rng, 1 + rng() % 12);
        if (k1 == k2) continue;
        ++pairs;
        const auto clip = moving_clip(rng, 24 + rng() % 24, 24 + rng() % 24, 2 + rng() % 4);
        const auto cap = capacity(clip, {}, k1);
        const auto s = testing::random_bytes(rng, std::min<std::uint64_t>(18, cap.capacity_static_bytes));
        const auto d = testing::random_bytes(rng, std::min<std::uint64_t>(3, cap.capacity_dynamic_bytes()));
        const auto stego = embed(clip, {}, s, d, k1).stego;
        const auto code = testing::error_of([&] { extract(stego, k2); });
        if (code == ErrorCode::BadMagic || code == ErrorCode::CrcMismatch) ++detected;
    }
    report("AC6", detected >= 99,
           "wrong-key safety: " + std::to_string(detected) + "/" + std::to_string(pairs) + " rejected (need >= 99)");
}

void ac7_codecs() {
    std::mt19937_64 rng(1007);
    int ppm_ok = 0, avi_ok = 0;
    for (int i = 0; i < 100; ++i) {
        auto clip = testing::random_clip(rng, 1 + rng() % 33, 1 + rng() % 33, 1 + rng() % 5);
        clip.set_fps(FrameRate::make(1 + rng() % 60000, 1 + rng() % 1001));

        bool ppm = true;
        for (const auto& f : clip.frames()) {
            const auto bytes = write_ppm(f);
            const auto back = read_ppm(bytes);
            ppm = ppm && back == f && write_ppm(back) == bytes;
        }
        if (ppm) ++ppm_ok;

        const auto avi = write_avi(clip);
        const auto back = read_avi(avi);
        if (back == clip && back.fps().num == clip.fps().num && back.fps().den == clip.fps().den &&
            write_avi(back) == avi) {
            ++avi_ok;
        }
    }
    report("AC7", ppm_ok == 100 && avi_ok == 100,
           "codec exactness: PPM " + std::to_string(ppm_ok) + "/100, AVI " + std::to_string(avi_ok) + "/100");
}

void ac8_oracles() {
    std::mt19937_64 rng(1008);
    int clips = 0, agree = 0;
    for (; clips < 120; ++clips) {
        const std::size_t w = 1 + rng() % 8, h = 1 + rng() % 8, n = 1 + rng() % 4;
        const auto clip = clips % 2 ? testing::random_clip(rng, w, h, n) : testing::mixed_clip(rng, w, h, n);
        AnalysisParams p;
        p.diff_threshold = static_cast<int>(rng() % 40);
        p.block_size = 1 + rng() % 8;
        p.mean_tol = static_cast<double>(rng() % 40) / 4.0;
        p.var_tol = static_cast<double>(rng() % 400) / 4.0;
        p.hist_bins = 2 + rng() % 63;
        p.hist_tol = static_cast<double>(rng() % 100) / 100.0;
        const bool ok = pixel_diff_map(clip, p) == testing::oracle_pixel_diff(clip, p.diff_threshold) &&
                        block_likelihood_map(clip, p) == testing::oracle_block(clip, p.block_size, p.mean_tol, p.var_tol) &&
                        histogram_map(clip, p) == testing::oracle_histogram(clip, p.block_size, p.hist_bins, p.hist_tol);
        if (ok) ++agree;
    }
    report("AC8", agree == clips,
           "detection oracles: " + std::to_string(agree) + "/" + std::to_string(clips) + " clips agree for all methods");
}

template <typename Fn>
void guarded(const char* id, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(id, false, std::string("threw: ") + e.what());
    }
}

} // namespace

int main() {
    guarded("AC1", ac1_round_trip);
    guarded("AC2", ac2_progression_positions);
    guarded("AC3", ac3_capacity);
    guarded("AC4", ac4_distortion);
    guarded("AC5", ac5_locality);
    guarded("AC6", ac6_wrong_key);
    guarded("AC7", ac7_codecs);
    guarded("AC8", ac8_oracles);
    std::printf("%d failing\n", failures);
    return failures == 0 ? 0 : 1;
}

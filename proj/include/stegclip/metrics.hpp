#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "frame.hpp"

namespace stegclip {

inline double mse(const Frame& a, const Frame& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(ErrorCode::DimensionMismatch, "frames differ in size");
    }
    const auto x = a.bytes();
    const auto y = b.bytes();
    // Exact integer sum; one final division.
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const int d = int{x[i]} - int{y[i]};
        sum += static_cast<std::uint64_t>(d * d);
    }
    return static_cast<double>(sum) / static_cast<double>(x.size());
}

inline double psnr(double mse_value) {
    if (mse_value < 0) {
        throw Error(ErrorCode::InvalidArgument, "mse must be >= 0");
    }
    if (mse_value == 0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse_value);
}

struct FidelityReport {
    std::vector<double> per_frame_mse;
    std::vector<double> per_frame_psnr;
    double mean_mse = 0;
    double mean_psnr = std::numeric_limits<double>::infinity(); // psnr(mean_mse)
    std::uint64_t changed_byte_count = 0;
    int max_abs_byte_delta = 0;
};

inline FidelityReport compare(const Clip& cover, const Clip& stego) {
    if (cover.width() != stego.width() || cover.height() != stego.height() ||
        cover.frame_count() != stego.frame_count()) {
        throw Error(ErrorCode::DimensionMismatch, "cover and stego clips differ in shape");
    }
    FidelityReport r;
    for (std::size_t t = 0; t < cover.frame_count(); ++t) {
        const auto m = mse(cover.frame(t), stego.frame(t));
        r.per_frame_mse.push_back(m);
        r.per_frame_psnr.push_back(psnr(m));
        r.mean_mse += m;

        const auto x = cover.frame(t).bytes();
        const auto y = stego.frame(t).bytes();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int d = std::abs(int{x[i]} - int{y[i]});
            if (d != 0) ++r.changed_byte_count;
            if (d > r.max_abs_byte_delta) r.max_abs_byte_delta = d;
        }
    }
    r.mean_mse /= static_cast<double>(cover.frame_count());
    r.mean_psnr = psnr(r.mean_mse);
    return r;
}

namespace metrics_detail {

inline std::string fmt_db(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

inline std::string fmt_mse(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace metrics_detail

inline std::string to_key_value(const FidelityReport& r) {
    using namespace metrics_detail;
    std::ostringstream os;
    os << "frames=" << r.per_frame_mse.size() << '\n'
       << "mean_mse=" << fmt_mse(r.mean_mse) << '\n'
       << "mean_psnr_db=" << fmt_db(r.mean_psnr) << '\n'
       << "changed_byte_count=" << r.changed_byte_count << '\n'
       << "max_abs_byte_delta=" << r.max_abs_byte_delta << '\n';
    for (std::size_t t = 0; t < r.per_frame_mse.size(); ++t) {
        os << "frame." << t + 1 << ".mse=" << fmt_mse(r.per_frame_mse[t]) << '\n'
           << "frame." << t + 1 << ".psnr_db=" << fmt_db(r.per_frame_psnr[t]) << '\n';
    }
    return os.str();
}

inline std::string to_table(const FidelityReport& r) {
    using namespace metrics_detail;
    std::ostringstream os;
    char line[96];
    std::snprintf(line, sizeof(line), "%8s  %14s  %12s\n", "frame", "mse", "psnr (dB)");
    os << line;
    for (std::size_t t = 0; t < r.per_frame_mse.size(); ++t) {
        std::snprintf(line, sizeof(line), "%8zu  %14s  %12s\n", t + 1, fmt_mse(r.per_frame_mse[t]).c_str(),
                      fmt_db(r.per_frame_psnr[t]).c_str());
        os << line;
    }
    std::snprintf(line, sizeof(line), "%8s  %14s  %12s\n", "mean", fmt_mse(r.mean_mse).c_str(),
                  fmt_db(r.mean_psnr).c_str());
    os << line;
    os << "changed bytes: " << r.changed_byte_count << ", max |delta|: " << r.max_abs_byte_delta << '\n';
    return os.str();
}

} // namespace stegclip

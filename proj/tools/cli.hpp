#pragma once

// stegclip command-line driver. Exit statuses:
//   0 success, 1 usage error, 2 capacity error, 3 integrity error
//   (wrong key, corrupted header), 4 I/O or format error.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stegclip/stegclip.hpp"

namespace stegclip::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kCapacity = 2,
    kIntegrity = 3,
    kIoFormat = 4,
};

inline int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return kUsage;
    case ErrorCode::CapacityExceeded:
    case ErrorCode::ClipTooSmall: return kCapacity;
    case ErrorCode::BadMagic:
    case ErrorCode::CrcMismatch:
    case ErrorCode::UnsupportedVersion:
    case ErrorCode::CorruptHeader:
    case ErrorCode::OutOfRange: return kIntegrity;
    default: return kIoFormat;
    }
}

namespace detail {

inline bool is_avi_path(const std::filesystem::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".avi";
}

inline Clip load_clip_path(const std::filesystem::path& p) {
    if (std::filesystem::is_directory(p)) {
        const auto paths = list_frame_dir(p);
        return read_frame_dir(paths);
    }
    return read_avi(read_file(p));
}

// Writes an AVI when the path ends in .avi, otherwise a numbered PPM directory.
inline void save_clip_path(const Clip& clip, const std::filesystem::path& p) {
    if (is_avi_path(p)) {
        write_file(p, write_avi(clip));
    } else {
        write_frame_dir(clip, p);
    }
}

struct InputArgs {
    std::string avi;
    std::string frames;

    void attach(CLI::App* cmd) {
        auto* a = cmd->add_option("--input-avi", avi, "Uncompressed RGB24 AVI file");
        auto* f = cmd->add_option("--input-frames", frames, "Directory of P6 PPM frames");
        a->excludes(f);
        f->excludes(a);
    }

    Clip load() const {
        if (avi.empty() == frames.empty()) {
            throw Error(ErrorCode::InvalidArgument, "exactly one of --input-avi / --input-frames is required");
        }
        return avi.empty() ? read_frame_dir(list_frame_dir(frames)) : read_avi(read_file(avi));
    }
};

struct AnalysisArgs {
    std::string method = "pixel-diff";
    AnalysisParams params;

    void attach(CLI::App* cmd) {
        cmd->add_option("--method", method, "pixel-diff | block | histogram")
            ->check(CLI::IsMember({"pixel-diff", "block", "histogram"}));
        cmd->add_option("--threshold", params.diff_threshold, "Pixel-diff gray threshold");
        cmd->add_option("--block-size", params.block_size, "Block edge in pixels");
        cmd->add_option("--bins", params.hist_bins, "Histogram bins per channel");
        cmd->add_option("--hist-tol", params.hist_tol, "Normalized histogram distance tolerance");
        cmd->add_option("--mean-tol", params.mean_tol, "Block mean tolerance");
        cmd->add_option("--var-tol", params.var_tol, "Block variance tolerance");
    }

    AnalysisParams resolve() const {
        auto p = params;
        p.method = parse_detection_method(method);
        p.validate();
        return p;
    }
};

struct KeyArgs {
    std::optional<std::string> key;
    std::string key_file;
    std::optional<std::string> key_dynamic;
    std::string key_dynamic_file;
    std::optional<std::uint64_t> ap_start;
    std::optional<std::uint64_t> ap_step;

    void attach(CLI::App* cmd, bool with_dynamic) {
        auto* k = cmd->add_option("--key", key, "Stego key (string bytes)");
        auto* kf = cmd->add_option("--key-file", key_file, "Stego key read as raw bytes from a file");
        k->excludes(kf);
        if (with_dynamic) {
            auto* kd = cmd->add_option("--key-dynamic", key_dynamic, "Key for the dynamic payload (default: --key)");
            auto* kdf = cmd->add_option("--key-dynamic-file", key_dynamic_file, "Dynamic key from a file");
            kd->excludes(kdf);
        }
        cmd->add_option("--ap-start", ap_start, "Override the progression start (1-based)")->check(CLI::PositiveNumber);
        cmd->add_option("--ap-step", ap_step, "Override the progression step")->check(CLI::PositiveNumber);
    }

    static std::optional<Bytes> resolve_one(const std::optional<std::string>& s, const std::string& file) {
        if (s) return to_bytes(*s);
        if (!file.empty()) return read_file(file);
        return std::nullopt;
    }

    KeyMaterial static_material() const {
        auto km = derive_key_material(resolve_one(key, key_file));
        if (ap_start) km.start_i = *ap_start;
        if (ap_step) km.step_d = *ap_step;
        return km;
    }

    KeyMaterial dynamic_material() const {
        const auto dyn = resolve_one(key_dynamic, key_dynamic_file);
        return dyn ? derive_key_material(dyn) : derive_key_material(resolve_one(key, key_file));
    }
};

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace detail;

    CLI::App app{"Hide payloads in uncompressed video clips and recover them", "stegclip"};
    app.require_subcommand(1);

    // analyze
    InputArgs analyze_in;
    AnalysisArgs analyze_params;
    std::string mask_out;
    auto* analyze_cmd = app.add_subcommand("analyze", "Classify pixels as static or dynamic");
    analyze_in.attach(analyze_cmd);
    analyze_params.attach(analyze_cmd);
    analyze_cmd->add_option("--mask-out", mask_out, "Write PGM masks (255 = dynamic) to this directory");

    // capacity
    InputArgs cap_in;
    AnalysisArgs cap_params;
    KeyArgs cap_keys;
    auto* cap_cmd = app.add_subcommand("capacity", "Report embedding capacity");
    cap_in.attach(cap_cmd);
    cap_params.attach(cap_cmd);
    cap_keys.attach(cap_cmd, false);

    // embed
    InputArgs embed_in;
    AnalysisArgs embed_params;
    KeyArgs embed_keys;
    std::string payload_file, payload_dynamic_file, embed_output;
    auto* embed_cmd = app.add_subcommand("embed", "Embed payloads into a cover clip");
    embed_in.attach(embed_cmd);
    embed_params.attach(embed_cmd);
    embed_keys.attach(embed_cmd, true);
    embed_cmd->add_option("--payload", payload_file, "Static-region payload file");
    embed_cmd->add_option("--payload-dynamic", payload_dynamic_file, "Dynamic-region payload file");
    embed_cmd->add_option("--output", embed_output, "Stego clip (.avi file or frame directory)")->required();

    // extract
    InputArgs extract_in;
    KeyArgs extract_keys;
    std::string extract_out, extract_out_dynamic;
    bool extract_check = false;
    auto* extract_cmd = app.add_subcommand("extract", "Recover payloads from a stego clip");
    extract_in.attach(extract_cmd);
    extract_keys.attach(extract_cmd, true);
    extract_cmd->add_option("--out", extract_out, "Static payload output file")->required();
    extract_cmd->add_option("--out-dynamic", extract_out_dynamic, "Dynamic payload output file");
    extract_cmd->add_flag("--check-map", extract_check,
                          "Re-run region analysis on the stego clip and report disagreement with the embedded map");

    // compare
    std::string cover_path, stego_path, compare_format = "kv";
    auto* compare_cmd = app.add_subcommand("compare", "Fidelity metrics between cover and stego clips");
    compare_cmd->add_option("--cover", cover_path, "Cover clip (.avi or frame directory)")->required();
    compare_cmd->add_option("--stego", stego_path, "Stego clip (.avi or frame directory)")->required();
    compare_cmd->add_option("--format", compare_format, "kv | table")->check(CLI::IsMember({"kv", "table"}));

    // gen
    TestClipSpec gen_spec;
    std::string gen_block = "8x8", gen_velocity = "2,0", gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic clip with a moving rectangle");
    gen_cmd->add_option("--width", gen_spec.width)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--height", gen_spec.height)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--frames", gen_spec.frames)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--block", gen_block, "Rectangle size WxH");
    gen_cmd->add_option("--velocity", gen_velocity, "Per-frame motion DX,DY");
    gen_cmd->add_option("--seed", gen_spec.seed);
    gen_cmd->add_option("--out", gen_out, "Output (.avi file or frame directory)")->required();

    // convert
    InputArgs convert_in;
    std::string convert_output;
    auto* convert_cmd = app.add_subcommand("convert", "Convert between AVI and PPM frame directories");
    convert_in.attach(convert_cmd);
    convert_cmd->add_option("--output", convert_output, "Output (.avi file or frame directory)")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (analyze_cmd->parsed()) {
            const auto clip = analyze_in.load();
            const auto params = analyze_params.resolve();
            const auto map = analyze(clip, params);
            out << "method=" << to_string(params.method) << '\n'
                << "frames=" << map.frame_count() << '\n'
                << "width=" << map.width() << '\n'
                << "height=" << map.height() << '\n'
                << "static_pixels=" << map.count(Label::Static) << '\n'
                << "dynamic_pixels=" << map.count(Label::Dynamic) << '\n';
            for (std::size_t t = 0; t < map.frame_count(); ++t) {
                out << "frame." << t + 1 << ".dynamic_pixels=" << map.count_in_frame(t, Label::Dynamic) << '\n';
            }
            if (!mask_out.empty()) {
                std::filesystem::create_directories(mask_out);
                for (std::size_t t = 0; t < map.frame_count(); ++t) {
                    write_file(std::filesystem::path(mask_out) / numbered_name("mask", t + 1, ".pgm"),
                               mask_to_pgm(map, t));
                }
            }
        } else if (cap_cmd->parsed()) {
            const auto clip = cap_in.load();
            out << to_key_value(capacity(clip, cap_params.resolve(), cap_keys.static_material()));
        } else if (embed_cmd->parsed()) {
            if (payload_file.empty() && payload_dynamic_file.empty()) {
                throw Error(ErrorCode::InvalidArgument, "embed needs --payload and/or --payload-dynamic");
            }
            const auto clip = embed_in.load();
            const Bytes static_payload = payload_file.empty() ? Bytes{} : read_file(payload_file);
            const Bytes dynamic_payload = payload_dynamic_file.empty() ? Bytes{} : read_file(payload_dynamic_file);
            const auto result = embed_with(clip, embed_params.resolve(), static_payload, dynamic_payload,
                                           embed_keys.static_material(), embed_keys.dynamic_material());
            save_clip_path(result.stego, embed_output);
            out << to_key_value(result.report);
        } else if (extract_cmd->parsed()) {
            const auto clip = extract_in.load();
            const auto result = extract_with(clip, extract_keys.static_material(), extract_keys.dynamic_material());
            write_file(extract_out, result.static_payload);
            if (!extract_out_dynamic.empty()) {
                write_file(extract_out_dynamic, result.dynamic_payload);
            }
            out << "method=" << to_string(result.method) << '\n'
                << "static_bytes=" << result.static_payload.size() << '\n'
                << "dynamic_bytes=" << result.dynamic_payload.size() << '\n';
            if (extract_check) {
                AnalysisParams params;
                params.method = result.method;
                const auto recomputed = analyze(clip, params);
                std::size_t disagree = 0;
                for (std::size_t p = 0; p < recomputed.size(); ++p) {
                    if (recomputed[p] != result.map[p]) ++disagree;
                }
                out << "map_disagreement_pixels=" << disagree << '\n';
            }
        } else if (compare_cmd->parsed()) {
            const auto report = compare(load_clip_path(cover_path), load_clip_path(stego_path));
            out << (compare_format == "table" ? to_table(report) : to_key_value(report));
        } else if (gen_cmd->parsed()) {
            std::size_t bw = 0, bh = 0;
            long long dx = 0, dy = 0;
            char sep = 0;
            if (std::sscanf(gen_block.c_str(), "%zux%zu", &bw, &bh) != 2 || bw == 0 || bh == 0) {
                throw Error(ErrorCode::InvalidArgument, "--block expects WxH, got '" + gen_block + "'");
            }
            if (std::sscanf(gen_velocity.c_str(), "%lld%c%lld", &dx, &sep, &dy) != 3 || sep != ',') {
                throw Error(ErrorCode::InvalidArgument, "--velocity expects DX,DY, got '" + gen_velocity + "'");
            }
            gen_spec.motion = {bw, bh, dx, dy};
            save_clip_path(gen_test_clip(gen_spec).clip, gen_out);
        } else if (convert_cmd->parsed()) {
            save_clip_path(convert_in.load(), convert_output);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoFormat;
    }
    return kOk;
}

} // namespace stegclip::cli

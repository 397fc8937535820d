#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stegclip {

enum class ErrorCode {
    // container / codec
    MalformedHeader,
    UnsupportedMaxval,
    TruncatedData,
    NotRiff,
    UnsupportedCodec,
    TruncatedChunk,
    DimensionMismatch,
    // keying
    SeedZero,
    // embedding / extraction
    InvalidArgument,
    OutOfRange,
    ClipTooSmall,
    CapacityExceeded,
    BadMagic,
    UnsupportedVersion,
    CrcMismatch,
    CorruptHeader,
    // filesystem
    Io,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::NotRiff: return "NotRiff";
    case ErrorCode::UnsupportedCodec: return "UnsupportedCodec";
    case ErrorCode::TruncatedChunk: return "TruncatedChunk";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SeedZero: return "SeedZero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ClipTooSmall: return "ClipTooSmall";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::CrcMismatch: return "CrcMismatch";
    case ErrorCode::CorruptHeader: return "CorruptHeader";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map them onto stable exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// True for failures that mean "wrong key or not a stego clip".
inline bool is_integrity_error(ErrorCode code) {
    return code == ErrorCode::BadMagic || code == ErrorCode::CrcMismatch ||
           code == ErrorCode::UnsupportedVersion || code == ErrorCode::CorruptHeader;
}

} // namespace stegclip

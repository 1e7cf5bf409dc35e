#pragma once

#include <stdexcept>
#include <string>

namespace rcdt {

/// Machine-checkable reason attached to every I/O failure.
enum class IoErrc {
    missing_file,
    malformed_header,
    truncated_payload,
    unsupported_format,
    malformed_manifest,
    duplicate_path,
    version_mismatch,
    corrupt_archive,
    write_failure,
};

const char* to_string(IoErrc code) noexcept;

/// Thrown by the dataset and model I/O routines.  Contract violations in
/// the numeric modules use std::invalid_argument instead.
class IoError : public std::runtime_error {
public:
    IoError(IoErrc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    IoErrc code() const noexcept { return code_; }

private:
    IoErrc code_;
};

}  // namespace rcdt

#include "rcdt/errors.hpp"

namespace rcdt {

const char* to_string(IoErrc code) noexcept {
    switch (code) {
        case IoErrc::missing_file: return "missing_file";
        case IoErrc::malformed_header: return "malformed_header";
        case IoErrc::truncated_payload: return "truncated_payload";
        case IoErrc::unsupported_format: return "unsupported_format";
        case IoErrc::malformed_manifest: return "malformed_manifest";
        case IoErrc::duplicate_path: return "duplicate_path";
        case IoErrc::version_mismatch: return "version_mismatch";
        case IoErrc::corrupt_archive: return "corrupt_archive";
        case IoErrc::write_failure: return "write_failure";
    }
    return "unknown";
}

}  // namespace rcdt

#pragma once

#include <filesystem>

#include "rcdt/classifier.hpp"
#include "rcdt/errors.hpp"

namespace rcdt {

/// Bumped whenever the archive layout changes incompatibly.
inline constexpr int kModelFormatVersion = 1;

/// Writes `base`.json (metadata: labels, feature configuration, per
/// subspace shapes and blob offsets) and `base`.bin (all basis matrices,
/// column-major float64, little-endian, concatenated in class-major
/// patch order).  A trailing .json or .bin on `base` is ignored.  The
/// bytes written are a pure function of the model, so retraining with
/// equal inputs yields identical archives.  Throws
/// IoError(write_failure) when a file cannot be written.
void save_model(const TrainedModel& model, const std::filesystem::path& base);

/// Reads an archive written by save_model.  Throws IoError:
/// missing_file, version_mismatch for a format_version this build does
/// not understand, or corrupt_archive when metadata and blob disagree
/// (sizes, offsets, shapes) or fields are malformed.
TrainedModel load_model(const std::filesystem::path& base);

}  // namespace rcdt

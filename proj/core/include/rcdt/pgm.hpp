#pragma once

#include <filesystem>

#include "rcdt/errors.hpp"
#include "rcdt/image.hpp"

namespace rcdt {

/// Decoded PGM: pixel values in [0, max_value] as doubles.
struct Pgm {
    GrayImage image;
    int max_value;
};

/// Reads a binary PGM (magic P5).  Comments (# to end of line) are
/// allowed in the header; 16-bit samples are big-endian as usual.
/// Throws IoError with a code describing what went wrong: missing_file,
/// unsupported_format for other Netpbm magics, malformed_header, or
/// truncated_payload.
Pgm load_pgm(const std::filesystem::path& path);

/// load_pgm, keeping only the pixel data.
GrayImage load_image(const std::filesystem::path& path);

/// Writes a binary PGM.  Pixels are rounded to the nearest integer and
/// clamped to [0, max_value]; max_value must lie in [1, 65535] and
/// selects between 1- and 2-byte samples.  Throws IoError(write_failure)
/// if the file cannot be written and std::invalid_argument for a bad
/// max_value.
void save_pgm(const GrayImage& image, const std::filesystem::path& path, int max_value = 255);

}  // namespace rcdt

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rcdt/errors.hpp"

namespace rcdt {

/// One dataset entry.  path is relative to the manifest's directory
/// unless absolute.
struct ManifestRow {
    std::string path;
    std::string label;
    std::string split;
};

/// CSV listing of a dataset: header `path,label,split`, one row per
/// image.  Rows keep file order; paths are unique.
class DatasetManifest {
public:
    DatasetManifest(std::filesystem::path root, std::vector<ManifestRow> rows);

    const std::filesystem::path& root() const noexcept { return root_; }
    const std::vector<ManifestRow>& rows() const noexcept { return rows_; }

    std::vector<ManifestRow> rows_for_split(const std::string& split) const;

    /// Split names in order of first appearance.
    std::vector<std::string> split_names() const;

    /// Absolute or root-relative location of a row's image.
    std::filesystem::path resolve(const ManifestRow& row) const;

private:
    std::filesystem::path root_;
    std::vector<ManifestRow> rows_;
};

/// Parses a manifest file.  Empty lines are skipped; fields are trimmed
/// of surrounding blanks.  Throws IoError: missing_file,
/// malformed_manifest (bad header, wrong field count, empty field) with
/// the offending line number, or duplicate_path.
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace rcdt

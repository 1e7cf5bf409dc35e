#include "rcdt/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace rcdt {

namespace {

std::string trim(const std::string& s) {
    std::size_t first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    std::size_t last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(trim(current));
    return fields;
}

}  // namespace

DatasetManifest::DatasetManifest(std::filesystem::path root, std::vector<ManifestRow> rows)
    : root_(std::move(root)), rows_(std::move(rows)) {}

std::vector<ManifestRow> DatasetManifest::rows_for_split(const std::string& split) const {
    std::vector<ManifestRow> out;
    for (const ManifestRow& row : rows_) {
        if (row.split == split) out.push_back(row);
    }
    return out;
}

std::vector<std::string> DatasetManifest::split_names() const {
    std::vector<std::string> names;
    for (const ManifestRow& row : rows_) {
        if (std::find(names.begin(), names.end(), row.split) == names.end()) {
            names.push_back(row.split);
        }
    }
    return names;
}

std::filesystem::path DatasetManifest::resolve(const ManifestRow& row) const {
    std::filesystem::path p(row.path);
    return p.is_absolute() ? p : root_ / p;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::string name = path.string();
    std::ifstream in(path);
    if (!in) {
        throw IoError(IoErrc::missing_file, name + ": cannot open file");
    }

    std::vector<ManifestRow> rows;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (!header_done) {
            if (fields != std::vector<std::string>{"path", "label", "split"}) {
                throw IoError(IoErrc::malformed_manifest,
                              name + ":" + std::to_string(line_no) +
                                  ": header must be 'path,label,split', got '" + line + "'");
            }
            header_done = true;
            continue;
        }
        if (fields.size() != 3) {
            throw IoError(IoErrc::malformed_manifest,
                          name + ":" + std::to_string(line_no) + ": expected 3 fields, got " +
                              std::to_string(fields.size()));
        }
        for (std::size_t i = 0; i < 3; ++i) {
            if (fields[i].empty()) {
                static const char* kNames[] = {"path", "label", "split"};
                throw IoError(IoErrc::malformed_manifest, name + ":" + std::to_string(line_no) +
                                                              ": empty " + kNames[i] + " field");
            }
        }
        if (!seen.insert(fields[0]).second) {
            throw IoError(IoErrc::duplicate_path, name + ":" + std::to_string(line_no) +
                                                      ": duplicate path '" + fields[0] + "'");
        }
        rows.push_back(ManifestRow{fields[0], fields[1], fields[2]});
    }
    if (!header_done) {
        throw IoError(IoErrc::malformed_manifest, name + ": missing header line");
    }
    return DatasetManifest(path.parent_path(), std::move(rows));
}

}  // namespace rcdt

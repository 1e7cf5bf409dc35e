#include "rcdt/model_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rcdt {

namespace {

using nlohmann::json;

std::filesystem::path strip_archive_extension(std::filesystem::path base) {
    std::string ext = base.extension().string();
    if (ext == ".json" || ext == ".bin") {
        base.replace_extension();
    }
    return base;
}

void put_f64_le(std::vector<unsigned char>& out, double value) {
    auto bits = std::bit_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
    }
}

double get_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

[[noreturn]] void corrupt(const std::string& name, const std::string& why) {
    throw IoError(IoErrc::corrupt_archive, name + ": " + why);
}

const char* gather_name(PatchGather g) {
    return g == PatchGather::interior ? "interior" : "all";
}

// Bounded unsigned read; guards against absurd or negative dimensions in
// a tampered archive before anything is allocated from them.
std::size_t read_bounded(const json& obj, const char* key, std::size_t max,
                         const std::string& name) {
    auto raw = obj.at(key).get<std::int64_t>();
    if (raw < 0 || static_cast<std::size_t>(raw) > max) {
        corrupt(name, std::string(key) + " value " + std::to_string(raw) + " outside [0, " +
                          std::to_string(max) + "]");
    }
    return static_cast<std::size_t>(raw);
}

}  // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& base) {
    std::filesystem::path stem = strip_archive_extension(base);
    if (stem.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(stem.parent_path(), ec);
        // A failure here surfaces as write_failure when the files open.
    }
    std::filesystem::path meta_path = stem;
    meta_path += ".json";
    std::filesystem::path blob_path = stem;
    blob_path += ".bin";

    json meta;
    meta["format"] = "rcdt-model";
    meta["format_version"] = kModelFormatVersion;
    meta["labels"] = model.labels;
    meta["config"] = {
        {"image_height", model.config.image_height},
        {"image_width", model.config.image_width},
        {"cell", model.config.cell},
        {"overlap", model.config.overlap},
        {"angles", model.config.angles},
        {"log_transform", model.config.log_transform},
        {"gather", gather_name(model.config.gather)},
    };

    std::vector<unsigned char> blob;
    json shapes = json::array();
    for (const auto& per_class : model.subspaces) {
        for (const SubjectPatchSubspace& s : per_class) {
            shapes.push_back({{"rows", s.basis.rows()},
                              {"cols", s.basis.cols()},
                              {"offset", blob.size()}});
            for (Eigen::Index j = 0; j < s.basis.cols(); ++j) {
                for (Eigen::Index i = 0; i < s.basis.rows(); ++i) {
                    put_f64_le(blob, s.basis(i, j));
                }
            }
        }
    }
    meta["subspaces"] = std::move(shapes);

    std::ofstream meta_out(meta_path, std::ios::trunc);
    if (!meta_out) {
        throw IoError(IoErrc::write_failure, meta_path.string() + ": cannot open for writing");
    }
    meta_out << meta.dump(2) << "\n";
    meta_out.flush();
    if (!meta_out) {
        throw IoError(IoErrc::write_failure, meta_path.string() + ": write failed");
    }

    std::ofstream blob_out(blob_path, std::ios::binary | std::ios::trunc);
    if (!blob_out) {
        throw IoError(IoErrc::write_failure, blob_path.string() + ": cannot open for writing");
    }
    blob_out.write(reinterpret_cast<const char*>(blob.data()),
                   static_cast<std::streamsize>(blob.size()));
    blob_out.flush();
    if (!blob_out) {
        throw IoError(IoErrc::write_failure, blob_path.string() + ": write failed");
    }
}

TrainedModel load_model(const std::filesystem::path& base) {
    std::filesystem::path stem = strip_archive_extension(base);
    std::filesystem::path meta_path = stem;
    meta_path += ".json";
    std::filesystem::path blob_path = stem;
    blob_path += ".bin";
    std::string name = meta_path.string();

    std::ifstream meta_in(meta_path);
    if (!meta_in) {
        throw IoError(IoErrc::missing_file, name + ": cannot open file");
    }
    json meta;
    try {
        meta = json::parse(meta_in);
    } catch (const json::parse_error& e) {
        corrupt(name, std::string("metadata is not valid JSON: ") + e.what());
    }

    try {
        if (meta.at("format").get<std::string>() != "rcdt-model") {
            corrupt(name, "not a model archive");
        }
        int version = meta.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw IoError(IoErrc::version_mismatch,
                          name + ": format version " + std::to_string(version) +
                              " is not supported, this build reads version " +
                              std::to_string(kModelFormatVersion));
        }

        TrainedModel model;
        model.labels = meta.at("labels").get<std::vector<std::string>>();
        if (model.labels.empty()) {
            corrupt(name, "label list is empty");
        }
        for (std::size_t c = 1; c < model.labels.size(); ++c) {
            if (!(model.labels[c - 1] < model.labels[c])) {
                corrupt(name, "labels are not unique and sorted");
            }
        }

        const json& cfg = meta.at("config");
        model.config.image_height = read_bounded(cfg, "image_height", 1u << 20, name);
        model.config.image_width = read_bounded(cfg, "image_width", 1u << 20, name);
        model.config.cell = read_bounded(cfg, "cell", 1u << 16, name);
        model.config.overlap = read_bounded(cfg, "overlap", 1u << 16, name);
        model.config.angles = read_bounded(cfg, "angles", 1u << 16, name);
        model.config.log_transform = cfg.at("log_transform").get<bool>();
        std::string gather = cfg.at("gather").get<std::string>();
        if (gather == "all") {
            model.config.gather = PatchGather::all;
        } else if (gather == "interior") {
            model.config.gather = PatchGather::interior;
        } else {
            corrupt(name, "unknown gather mode '" + gather + "'");
        }

        std::size_t patch_count = 0;
        std::size_t expected_rows = 0;
        try {
            PatchGrid grid(model.config.image_height, model.config.image_width, model.config.cell,
                           model.config.overlap);
            patch_count = grid.patch_count();
            expected_rows = model.config.points_per_patch() * model.config.angles;
        } catch (const std::invalid_argument& e) {
            corrupt(name, std::string("inconsistent configuration: ") + e.what());
        }
        if (model.config.angles == 0) {
            corrupt(name, "inconsistent configuration: angle count is zero");
        }

        const json& shapes = meta.at("subspaces");
        if (!shapes.is_array() || shapes.size() != model.labels.size() * patch_count) {
            corrupt(name, "expected " + std::to_string(model.labels.size() * patch_count) +
                              " subspace entries, found " + std::to_string(shapes.size()));
        }

        std::ifstream blob_in(blob_path, std::ios::binary);
        if (!blob_in) {
            throw IoError(IoErrc::missing_file, blob_path.string() + ": cannot open file");
        }
        std::vector<unsigned char> blob((std::istreambuf_iterator<char>(blob_in)),
                                        std::istreambuf_iterator<char>());

        model.subspaces.resize(model.labels.size());
        std::size_t cursor = 0;
        std::size_t entry = 0;
        for (std::size_t c = 0; c < model.labels.size(); ++c) {
            model.subspaces[c].resize(patch_count);
            for (std::size_t k = 0; k < patch_count; ++k, ++entry) {
                const json& shape = shapes.at(entry);
                auto rows = shape.at("rows").get<std::size_t>();
                auto cols = shape.at("cols").get<std::size_t>();
                auto offset = shape.at("offset").get<std::size_t>();
                if (rows != expected_rows) {
                    corrupt(name, "subspace " + std::to_string(entry) + " has " +
                                      std::to_string(rows) + " rows, configuration implies " +
                                      std::to_string(expected_rows));
                }
                if (cols == 0 || cols > rows) {
                    corrupt(name, "subspace " + std::to_string(entry) + " has a bad rank " +
                                      std::to_string(cols));
                }
                if (offset != cursor) {
                    corrupt(name, "subspace " + std::to_string(entry) + " offset " +
                                      std::to_string(offset) + " does not match the blob layout");
                }
                std::size_t bytes = rows * cols * 8;
                if (cursor + bytes > blob.size()) {
                    corrupt(name, "blob is shorter than the metadata promises");
                }
                Eigen::MatrixXd basis(static_cast<Eigen::Index>(rows),
                                      static_cast<Eigen::Index>(cols));
                const unsigned char* p = blob.data() + cursor;
                for (Eigen::Index j = 0; j < basis.cols(); ++j) {
                    for (Eigen::Index i = 0; i < basis.rows(); ++i, p += 8) {
                        double v = get_f64_le(p);
                        if (!std::isfinite(v)) {
                            corrupt(name, "blob holds a non-finite coefficient");
                        }
                        basis(i, j) = v;
                    }
                }
                cursor += bytes;
                model.subspaces[c][k].basis = std::move(basis);
            }
        }
        if (cursor != blob.size()) {
            corrupt(name, "blob holds " + std::to_string(blob.size()) + " bytes, metadata expects " +
                              std::to_string(cursor));
        }
        return model;
    } catch (const json::exception& e) {
        corrupt(name, std::string("metadata field error: ") + e.what());
    }
}

}  // namespace rcdt

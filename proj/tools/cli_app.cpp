#include "cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcdt/classifier.hpp"
#include "rcdt/errors.hpp"
#include "rcdt/features.hpp"
#include "rcdt/illumination.hpp"
#include "rcdt/manifest.hpp"
#include "rcdt/model_io.hpp"
#include "rcdt/oracle.hpp"
#include "rcdt/parallel.hpp"
#include "rcdt/pgm.hpp"

namespace rcdt::cli {

namespace {

using nlohmann::json;

Interval parse_range(const std::string& text, const char* flag) {
    std::size_t colon = text.find(':');
    auto fail = [&]() -> Interval {
        throw std::invalid_argument(std::string(flag) + " must be lo:hi with numeric bounds, got '" +
                                    text + "'");
    };
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        return fail();
    }
    Interval iv;
    try {
        std::size_t used = 0;
        iv.lo = std::stod(text.substr(0, colon), &used);
        if (used != colon) return fail();
        std::string hi = text.substr(colon + 1);
        iv.hi = std::stod(hi, &used);
        if (used != hi.size()) return fail();
    } catch (const std::exception&) {
        return fail();
    }
    if (iv.lo > iv.hi) {
        throw std::invalid_argument(std::string(flag) + " bounds are reversed: " + text);
    }
    return iv;
}

struct LoadedSplit {
    std::vector<ManifestRow> rows;
    std::vector<GrayImage> images;
};

std::string shape_of(const GrayImage& img) {
    return std::to_string(img.height()) + "x" + std::to_string(img.width());
}

// Loads every image of a split and checks that they share one shape.
LoadedSplit load_split(const DatasetManifest& manifest, const std::string& split,
                       std::size_t threads) {
    LoadedSplit loaded;
    loaded.rows = manifest.rows_for_split(split);
    if (loaded.rows.empty()) {
        std::string available;
        for (const std::string& name : manifest.split_names()) {
            if (!available.empty()) available += ", ";
            available += "'" + name + "'";
        }
        throw std::invalid_argument("manifest has no rows in split '" + split +
                                    "'; available splits: " +
                                    (available.empty() ? "none" : available));
    }
    std::vector<std::optional<GrayImage>> slots(loaded.rows.size());
    parallel_for(slots.size(), threads, [&](std::size_t i) {
        slots[i] = load_image(manifest.resolve(loaded.rows[i]));
    });
    for (std::size_t i = 1; i < slots.size(); ++i) {
        if (slots[i]->height() != slots[0]->height() || slots[i]->width() != slots[0]->width()) {
            throw std::invalid_argument("image sizes differ: " + loaded.rows[0].path + " is " +
                                        shape_of(*slots[0]) + ", " + loaded.rows[i].path + " is " +
                                        shape_of(*slots[i]));
        }
    }
    loaded.images.reserve(slots.size());
    for (auto& slot : slots) {
        loaded.images.push_back(std::move(*slot));
    }
    return loaded;
}

std::vector<FeatureSet> extract_all(const std::vector<GrayImage>& images, const PatchGrid& grid,
                                    const AngleGrid& angles, bool log_transform,
                                    PatchGather gather, std::size_t threads) {
    std::vector<std::optional<FeatureSet>> slots(images.size());
    parallel_for(images.size(), threads, [&](std::size_t i) {
        slots[i] = extract_features(images[i], grid, angles, log_transform, gather);
    });
    std::vector<FeatureSet> out;
    out.reserve(slots.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

struct TrainOpts {
    std::string manifest;
    std::string model;
    std::size_t cell = 4;
    std::size_t overlap = 2;
    std::size_t angles = 8;
    double variance = 0.99;
    bool log_transform = false;
    bool interior_only = false;
    std::size_t threads = 0;
};

int cmd_train(const TrainOpts& opts, std::ostream& out, std::ostream& err) {
    auto start = std::chrono::steady_clock::now();
    DatasetManifest manifest = load_manifest(opts.manifest);
    LoadedSplit split = load_split(manifest, "train", opts.threads);

    PatchGrid grid(split.images[0].height(), split.images[0].width(), opts.cell, opts.overlap);
    AngleGrid angles(opts.angles);
    PatchGather gather = opts.interior_only ? PatchGather::interior : PatchGather::all;
    std::vector<FeatureSet> features =
        extract_all(split.images, grid, angles, opts.log_transform, gather, opts.threads);

    std::vector<std::string> labels;
    for (const ManifestRow& row : split.rows) {
        labels.push_back(row.label);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    std::vector<std::vector<FeatureSet>> per_class(labels.size());
    for (std::size_t i = 0; i < split.rows.size(); ++i) {
        std::size_t c = static_cast<std::size_t>(
            std::lower_bound(labels.begin(), labels.end(), split.rows[i].label) - labels.begin());
        per_class[c].push_back(std::move(features[i]));
    }

    TrainedModel model = train_model(labels, per_class, opts.variance, opts.threads);
    save_model(model, opts.model);
    auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json ranks = json::array();
    for (const auto& per_class_spaces : model.subspaces) {
        json row = json::array();
        for (const SubjectPatchSubspace& s : per_class_spaces) {
            row.push_back(s.rank());
        }
        ranks.push_back(std::move(row));
    }
    json summary;
    summary["classes"] = model.class_count();
    summary["patches"] = model.patch_count();
    summary["images"] = split.rows.size();
    summary["feature_rows"] = model.config.points_per_patch() * model.config.angles;
    summary["model"] = opts.model;
    summary["ranks"] = std::move(ranks);
    summary["wall_seconds"] = seconds;
    out << summary.dump(2) << "\n";
    err << "trained " << model.class_count() << " classes x " << model.patch_count()
        << " patches from " << split.rows.size() << " images\n";
    return 0;
}

struct PredictOpts {
    std::string model;
    std::string image;
    bool per_patch = false;
};

int cmd_predict(const PredictOpts& opts, std::ostream& out, std::ostream&) {
    TrainedModel model = load_model(opts.model);
    GrayImage image = load_image(opts.image);
    PatchGrid grid(model.config.image_height, model.config.image_width, model.config.cell,
                   model.config.overlap);
    AngleGrid angles(model.config.angles);
    FeatureSet features =
        extract_features(image, grid, angles, model.config.log_transform, model.config.gather);
    ClassificationResult result = classify(features, model);

    json doc;
    doc["image"] = opts.image;
    doc["predicted"] = result.predicted_label;
    // Ranking: closest subspace first, ties by label order.
    std::vector<std::size_t> order(model.labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&result](std::size_t a, std::size_t b) {
        return result.class_distances[a] < result.class_distances[b];
    });
    json distances = json::array();
    for (std::size_t c : order) {
        distances.push_back({{"label", model.labels[c]}, {"distance", result.class_distances[c]}});
    }
    doc["distances"] = std::move(distances);
    if (opts.per_patch) {
        doc["patch_distances"] = result.patch_distances;
    }
    out << doc.dump(2) << "\n";
    return 0;
}

struct EvaluateOpts {
    std::string model;
    std::string manifest;
    std::string split;
    std::size_t threads = 0;
};

int cmd_evaluate(const EvaluateOpts& opts, std::ostream& out, std::ostream& err) {
    TrainedModel model = load_model(opts.model);
    DatasetManifest manifest = load_manifest(opts.manifest);
    LoadedSplit split = load_split(manifest, opts.split, opts.threads);

    PatchGrid grid(model.config.image_height, model.config.image_width, model.config.cell,
                   model.config.overlap);
    AngleGrid angles(model.config.angles);

    std::vector<std::size_t> predictions(split.rows.size());
    std::vector<std::vector<double>> distances(split.rows.size());
    parallel_for(split.rows.size(), opts.threads, [&](std::size_t i) {
        FeatureSet features = extract_features(split.images[i], grid, angles,
                                               model.config.log_transform, model.config.gather);
        ClassificationResult result = classify(features, model);
        predictions[i] = result.predicted_index;
        distances[i] = std::move(result.class_distances);
    });

    auto label_index = [&model](const std::string& label) -> std::optional<std::size_t> {
        auto it = std::lower_bound(model.labels.begin(), model.labels.end(), label);
        if (it == model.labels.end() || *it != label) return std::nullopt;
        return static_cast<std::size_t>(it - model.labels.begin());
    };

    std::size_t classes = model.class_count();
    std::vector<std::vector<std::size_t>> confusion(classes,
                                                    std::vector<std::size_t>(classes, 0));
    std::size_t correct = 0;
    // Margin of a labeled image: closest wrong-class distance minus true-class
    // distance. Positive means correctly classified with that much slack.
    double margin_sum = 0.0;
    std::size_t margin_count = 0;
    json rows = json::array();
    for (std::size_t i = 0; i < split.rows.size(); ++i) {
        const ManifestRow& row = split.rows[i];
        std::optional<std::size_t> truth = label_index(row.label);
        bool hit = truth && *truth == predictions[i];
        if (hit) ++correct;
        json entry = {{"path", row.path},
                      {"label", row.label},
                      {"predicted", model.labels[predictions[i]]},
                      {"correct", hit}};
        if (truth) {
            ++confusion[*truth][predictions[i]];
            if (classes > 1) {
                double best_other = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < classes; ++c) {
                    if (c != *truth) best_other = std::min(best_other, distances[i][c]);
                }
                double margin = best_other - distances[i][*truth];
                entry["margin"] = margin;
                margin_sum += margin;
                ++margin_count;
            }
        }
        rows.push_back(std::move(entry));
    }

    json doc;
    doc["split"] = opts.split;
    doc["images"] = split.rows.size();
    doc["correct"] = correct;
    doc["accuracy"] = static_cast<double>(correct) / static_cast<double>(split.rows.size());
    doc["labels"] = model.labels;
    doc["confusion"] = confusion;
    if (margin_count > 0) {
        doc["mean_margin"] = margin_sum / static_cast<double>(margin_count);
    } else {
        doc["mean_margin"] = nullptr;
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << "\n";
    err << "split '" << opts.split << "': " << correct << "/" << split.rows.size()
        << " correct\n";
    return 0;
}

struct AugmentOpts {
    std::string image;
    std::string out_dir;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::string alpha_range = "0.1:3";
    std::string beta_range = "1:30";
    std::string b_range = "0.1:3";
    std::size_t threads = 0;
};

int cmd_augment(const AugmentOpts& opts, std::ostream& out, std::ostream& err) {
    SamplingRanges ranges;
    ranges.alpha = parse_range(opts.alpha_range, "--alpha-range");
    ranges.beta = parse_range(opts.beta_range, "--beta-range");
    ranges.b = parse_range(opts.b_range, "--b-range");

    Pgm source = load_pgm(opts.image);
    std::vector<GlobalIlluminationParams> params = sample_illumination(ranges, opts.count, opts.seed);

    std::filesystem::path dir(opts.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError(IoErrc::write_failure,
                      dir.string() + ": cannot create output directory (" + ec.message() + ")");
    }
    std::string stem = std::filesystem::path(opts.image).stem().string();
    int pad = 3;
    for (std::size_t rest = opts.count; rest >= 1000; rest /= 10) ++pad;

    std::vector<json> entries(opts.count);
    parallel_for(opts.count, opts.threads, [&](std::size_t i) {
        IlluminatedImage shaded = apply_global_illumination(source.image, params[i]);
        double peak = 0.0;
        for (double v : shaded.image.pixels()) peak = std::max(peak, v);
        int max_value = peak <= static_cast<double>(source.max_value) ? source.max_value : 65535;
        std::ostringstream file;
        file << stem << "_aug_" << std::setw(pad) << std::setfill('0') << i << ".pgm";
        std::filesystem::path path = dir / file.str();
        save_pgm(shaded.image, path, max_value);
        entries[i] = {{"path", path.string()},       {"alpha", params[i].alpha},
                      {"beta", params[i].beta},      {"bx", params[i].b.x},
                      {"by", params[i].b.y},         {"max_value", max_value},
                      {"clamped_pixels", shaded.clamped_pixels}};
    });

    json doc;
    doc["image"] = opts.image;
    doc["count"] = opts.count;
    doc["seed"] = opts.seed;
    doc["out_dir"] = opts.out_dir;
    doc["outputs"] = entries;
    out << doc.dump(2) << "\n";
    err << "wrote " << opts.count << " augmented copies to " << opts.out_dir << "\n";
    return 0;
}

struct SelftestOpts {
    std::uint64_t seed = 0;
    std::size_t trials = 200;
};

int cmd_selftest(const SelftestOpts& opts, std::ostream& out, std::ostream& err) {
    PropertyReport report = run_property_suite(opts.seed, opts.trials);
    out << report.to_json(2) << "\n";
    if (!report.all_passed()) {
        for (const PropertyResult& r : report.properties) {
            if (!r.passed) {
                err << "property '" << r.name << "' failed: max deviation " << r.max_deviation
                    << " exceeds " << r.tolerance << " (replay seed " << *r.failure_seed << ")\n";
            }
        }
        return 1;
    }
    err << "all " << report.properties.size() << " properties passed (" << opts.trials
        << " trials each)\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"patch-wise sliced transport features and nearest-subspace classification"};
    app.require_subcommand(1);

    TrainOpts train_opts;
    CLI::App* train = app.add_subcommand("train", "train a model from the manifest's train split");
    train->add_option("--manifest", train_opts.manifest, "dataset manifest CSV")->required();
    train->add_option("--model", train_opts.model, "output archive base path")->required();
    train->add_option("--cell", train_opts.cell, "patch side in pixels")
        ->capture_default_str();
    train->add_option("--overlap", train_opts.overlap, "patch overlap in pixels")
        ->capture_default_str();
    train->add_option("--angles", train_opts.angles, "number of projection angles")
        ->capture_default_str();
    train->add_option("--variance", train_opts.variance,
                      "fraction of squared spectrum kept per subspace")
        ->capture_default_str();
    train->add_flag("--log-transform", train_opts.log_transform,
                    "log(1 + p) before gradients");
    train->add_flag("--interior-only", train_opts.interior_only,
                    "gather gradients only from patch-interior pixels");
    train->add_option("--threads", train_opts.threads, "worker threads, 0 = all cores");

    PredictOpts predict_opts;
    CLI::App* predict = app.add_subcommand("predict", "classify one image");
    predict->add_option("image", predict_opts.image, "PGM image")->required();
    predict->add_option("--model", predict_opts.model, "model archive base path")->required();
    predict->add_flag("--per-patch-distances", predict_opts.per_patch,
                      "include the per-patch distance table");

    EvaluateOpts evaluate_opts;
    CLI::App* evaluate = app.add_subcommand("evaluate", "classify a whole manifest split");
    evaluate->add_option("split", evaluate_opts.split, "manifest split to evaluate")->required();
    evaluate->add_option("--model", evaluate_opts.model, "model archive base path")->required();
    evaluate->add_option("--manifest", evaluate_opts.manifest, "dataset manifest CSV")->required();
    evaluate->add_option("--threads", evaluate_opts.threads, "worker threads, 0 = all cores");

    AugmentOpts augment_opts;
    CLI::App* augment = app.add_subcommand("augment", "write illumination-perturbed copies");
    augment->add_option("image", augment_opts.image, "source PGM image")->required();
    augment->add_option("--out", augment_opts.out_dir, "output directory")->required();
    augment->add_option("--count", augment_opts.count, "number of copies")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    augment->add_option("--seed", augment_opts.seed, "sampling seed")->capture_default_str();
    augment->add_option("--alpha-range", augment_opts.alpha_range, "gain interval lo:hi")
        ->capture_default_str();
    augment->add_option("--beta-range", augment_opts.beta_range, "offset interval lo:hi")
        ->capture_default_str();
    augment->add_option("--b-range", augment_opts.b_range,
                        "linear ramp coefficient interval lo:hi")
        ->capture_default_str();
    augment->add_option("--threads", augment_opts.threads, "worker threads, 0 = all cores");

    SelftestOpts selftest_opts;
    CLI::App* selftest = app.add_subcommand("selftest", "run the randomized property suite");
    selftest->add_option("--seed", selftest_opts.seed, "suite seed")->capture_default_str();
    selftest->add_option("--trials", selftest_opts.trials, "trials per property")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("rcdt");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (train->parsed()) return cmd_train(train_opts, out, err);
        if (predict->parsed()) return cmd_predict(predict_opts, out, err);
        if (evaluate->parsed()) return cmd_evaluate(evaluate_opts, out, err);
        if (augment->parsed()) return cmd_augment(augment_opts, out, err);
        if (selftest->parsed()) return cmd_selftest(selftest_opts, out, err);
        err << "error: no subcommand given\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace rcdt::cli

#include "rcdt/classifier.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rcdt/parallel.hpp"

namespace rcdt {

DeformationSpanningSet build_spanning_set(const AngleGrid& grid, std::size_t points_per_patch) {
    if (points_per_patch == 0) {
        throw std::invalid_argument("spanning set needs a positive patch point count");
    }
    auto n = static_cast<Eigen::Index>(points_per_patch);
    auto m = static_cast<Eigen::Index>(grid.count());
    DeformationSpanningSet span;
    span.u1.resize(n * m);
    span.u2.resize(n * m);
    for (Eigen::Index j = 0; j < m; ++j) {
        Point2 w = grid.direction(static_cast<std::size_t>(j));
        span.u1.segment(j * n, n).setConstant(w.x);
        span.u2.segment(j * n, n).setConstant(w.y);
    }
    return span;
}

SubjectPatchSubspace train_subspace(const std::vector<Eigen::VectorXd>& features,
                                    const DeformationSpanningSet& span, double variance_keep) {
    if (features.empty()) {
        throw std::invalid_argument("train_subspace needs at least one feature vector");
    }
    if (!(variance_keep > 0.0 && variance_keep <= 1.0)) {
        throw std::invalid_argument("variance_keep must lie in (0, 1], got " +
                                    std::to_string(variance_keep));
    }
    Eigen::Index n = span.u1.size();
    if (span.u2.size() != n) {
        throw std::invalid_argument("spanning set vectors disagree in length");
    }
    for (const Eigen::VectorXd& f : features) {
        if (f.size() != n) {
            throw std::invalid_argument("feature length " + std::to_string(f.size()) +
                                        " does not match the spanning set length " +
                                        std::to_string(n));
        }
    }

    auto l = static_cast<Eigen::Index>(features.size());
    Eigen::MatrixXd stacked(n, l + 2);
    for (Eigen::Index i = 0; i < l; ++i) {
        stacked.col(i) = features[static_cast<std::size_t>(i)];
    }
    stacked.col(l) = span.u1;
    stacked.col(l + 1) = span.u2;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
    const Eigen::VectorXd& sigma = svd.singularValues();
    double total = sigma.squaredNorm();
    // Numerical rank cutoff relative to the largest singular value; the
    // spanning set guarantees sigma(0) > 0.
    double floor = sigma(0) * 1e-10;
    Eigen::Index numerical_rank = 0;
    while (numerical_rank < sigma.size() && sigma(numerical_rank) > floor) {
        ++numerical_rank;
    }
    // Smallest rank whose spectrum share reaches variance_keep.  The
    // tiny slack keeps variance_keep = 1 attainable under rounding.
    double target = variance_keep * total * (1.0 - 1e-12);
    Eigen::Index rank = numerical_rank;
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < numerical_rank; ++i) {
        cumulative += sigma(i) * sigma(i);
        if (cumulative >= target) {
            rank = i + 1;
            break;
        }
    }

    Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);

    // Re-append the deformation directions so truncation can never drop
    // them.  Twice-iterated Gram-Schmidt keeps the basis orthonormal.
    for (const Eigen::VectorXd* u : {&span.u1, &span.u2}) {
        double scale = u->norm();
        if (scale == 0.0) {
            continue;  // a one-angle grid has an all-zero sine direction
        }
        Eigen::VectorXd w = *u - basis * (basis.transpose() * *u);
        w -= basis * (basis.transpose() * w);
        if (w.norm() > 1e-10 * scale) {
            basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
            basis.col(basis.cols() - 1) = w / w.norm();
        }
    }
    return SubjectPatchSubspace{std::move(basis)};
}

double subspace_distance(const Eigen::VectorXd& v, const SubjectPatchSubspace& subspace) {
    if (v.size() != subspace.basis.rows()) {
        throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                    " does not match the subspace dimension " +
                                    std::to_string(subspace.basis.rows()));
    }
    Eigen::VectorXd residual = v - subspace.basis * (subspace.basis.transpose() * v);
    return residual.norm();
}

Eigen::VectorXd flatten_feature(const RcdtRepresentation& r) {
    return Eigen::Map<const Eigen::VectorXd>(r.data().data(),
                                             static_cast<Eigen::Index>(r.data().size()));
}

ClassificationResult classify(const FeatureSet& features, const TrainedModel& model) {
    if (!(features.config == model.config)) {
        throw std::invalid_argument("feature configuration differs from the model: " +
                                    features.config.describe_difference(model.config));
    }
    std::size_t classes = model.class_count();
    std::size_t patches = model.patch_count();
    if (classes == 0 || patches == 0) {
        throw std::invalid_argument("model is empty");
    }
    if (features.patches.size() != patches) {
        throw std::invalid_argument("feature set has " + std::to_string(features.patches.size()) +
                                    " patches, model expects " + std::to_string(patches));
    }

    std::vector<Eigen::VectorXd> flat(patches);
    for (std::size_t k = 0; k < patches; ++k) {
        flat[k] = flatten_feature(features.patches[k]);
    }

    ClassificationResult result;
    result.class_distances.assign(classes, 0.0);
    result.patch_distances.assign(classes, std::vector<double>(patches, 0.0));
    for (std::size_t c = 0; c < classes; ++c) {
        double sum = 0.0;
        for (std::size_t k = 0; k < patches; ++k) {
            double d = subspace_distance(flat[k], model.subspaces[c][k]);
            result.patch_distances[c][k] = d;
            sum += d;
        }
        result.class_distances[c] = sum;
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < classes; ++c) {
        if (result.class_distances[c] < result.class_distances[best]) {
            best = c;  // ties keep the lower label
        }
    }
    result.predicted_index = best;
    result.predicted_label = model.labels[best];
    return result;
}

TrainedModel train_model(const std::vector<std::string>& labels,
                         const std::vector<std::vector<FeatureSet>>& features_per_class,
                         double variance_keep, std::size_t threads) {
    if (labels.empty() || labels.size() != features_per_class.size()) {
        throw std::invalid_argument("train_model needs one feature list per label");
    }
    for (std::size_t c = 1; c < labels.size(); ++c) {
        if (!(labels[c - 1] < labels[c])) {
            throw std::invalid_argument("labels must be unique and sorted ascending");
        }
    }
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (features_per_class[c].empty()) {
            throw std::invalid_argument("class '" + labels[c] + "' has no training features");
        }
    }

    const FeatureConfig& config = features_per_class.front().front().config;
    std::size_t patches = features_per_class.front().front().patches.size();
    for (std::size_t c = 0; c < features_per_class.size(); ++c) {
        for (const FeatureSet& fs : features_per_class[c]) {
            if (!(fs.config == config)) {
                throw std::invalid_argument("class '" + labels[c] +
                                            "' was extracted under a different configuration: " +
                                            fs.config.describe_difference(config));
            }
            if (fs.patches.size() != patches) {
                throw std::invalid_argument("class '" + labels[c] +
                                            "' has an inconsistent patch count");
            }
        }
    }

    AngleGrid grid(config.angles);
    DeformationSpanningSet span = build_spanning_set(grid, config.points_per_patch());

    TrainedModel model;
    model.labels = labels;
    model.config = config;
    model.subspaces.resize(labels.size());
    for (auto& per_class : model.subspaces) {
        per_class.resize(patches);
    }
    parallel_for(labels.size() * patches, threads, [&](std::size_t idx) {
        std::size_t c = idx / patches;
        std::size_t k = idx % patches;
        std::vector<Eigen::VectorXd> stack;
        stack.reserve(features_per_class[c].size());
        for (const FeatureSet& fs : features_per_class[c]) {
            stack.push_back(flatten_feature(fs.patches[k]));
        }
        model.subspaces[c][k] = train_subspace(stack, span, variance_keep);
    });
    return model;
}

double select_components(const std::vector<std::string>& labels,
                         const std::vector<std::vector<FeatureSet>>& features_per_class,
                         const std::vector<ValidationSample>& validation,
                         const std::vector<double>& candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("select_components needs at least one candidate");
    }
    if (validation.empty()) {
        throw std::invalid_argument("select_components needs a nonempty validation split");
    }
    std::vector<bool> covered(labels.size(), false);
    for (const ValidationSample& sample : validation) {
        if (sample.label_index >= labels.size()) {
            throw std::invalid_argument("validation label index out of range");
        }
        covered[sample.label_index] = true;
    }
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (!covered[c]) {
            throw std::invalid_argument("class '" + labels[c] + "' has no validation sample");
        }
    }
    double best_value = std::numeric_limits<double>::quiet_NaN();
    std::size_t best_hits = 0;
    for (double candidate : candidates) {
        TrainedModel model = train_model(labels, features_per_class, candidate);
        std::size_t hits = 0;
        for (const ValidationSample& sample : validation) {
            if (classify(sample.features, model).predicted_index == sample.label_index) {
                ++hits;
            }
        }
        if (std::isnan(best_value) || hits > best_hits ||
            (hits == best_hits && candidate < best_value)) {
            best_value = candidate;
            best_hits = hits;
        }
    }
    return best_value;
}

}  // namespace rcdt

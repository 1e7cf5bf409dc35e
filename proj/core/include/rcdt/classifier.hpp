#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

#include "rcdt/features.hpp"
#include "rcdt/transport.hpp"

namespace rcdt {

/// Directions in feature space swept out by translating the underlying
/// measure: translating by b shifts the transform column for angle theta
/// by b . (cos theta, sin theta).  u1 stacks cos theta_j over each
/// column's rows, u2 stacks sin theta_j, both flattened column-major to
/// match RcdtRepresentation::data().
struct DeformationSpanningSet {
    Eigen::VectorXd u1;
    Eigen::VectorXd u2;
};

/// Throws std::invalid_argument if points_per_patch is zero.
DeformationSpanningSet build_spanning_set(const AngleGrid& grid, std::size_t points_per_patch);

/// Orthonormal basis of the subspace learned for one (subject, patch)
/// pair.  Columns are orthonormal; the span always contains the
/// translation directions of the spanning set.
struct SubjectPatchSubspace {
    Eigen::MatrixXd basis;

    std::size_t rank() const noexcept { return static_cast<std::size_t>(basis.cols()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(basis.rows()); }
};

/// Learns the subspace spanned by the given feature vectors together
/// with the deformation directions.  An uncentered SVD of the stacked
/// columns is truncated to the smallest rank capturing at least
/// variance_keep of the total squared spectrum; the spanning-set
/// directions are then re-orthogonalised against the kept basis and
/// appended, so they are never truncated away.
///
/// Throws std::invalid_argument if features is empty, sizes are
/// inconsistent with the spanning set, or variance_keep is outside
/// (0, 1].
SubjectPatchSubspace train_subspace(const std::vector<Eigen::VectorXd>& features,
                                    const DeformationSpanningSet& span, double variance_keep);

/// Euclidean distance from v to its orthogonal projection onto the
/// subspace.  Zero (up to rounding) iff v lies in the span.
double subspace_distance(const Eigen::VectorXd& v, const SubjectPatchSubspace& subspace);

/// Copies a transform matrix into a dense vector, column-major.
Eigen::VectorXd flatten_feature(const RcdtRepresentation& r);

/// Per-class, per-patch subspaces plus the feature configuration they
/// were trained under.  labels are unique and sorted ascending;
/// subspaces[c][k] belongs to labels[c] and patch k.
struct TrainedModel {
    std::vector<std::string> labels;
    std::vector<std::vector<SubjectPatchSubspace>> subspaces;
    FeatureConfig config;

    std::size_t class_count() const noexcept { return labels.size(); }
    std::size_t patch_count() const noexcept {
        return subspaces.empty() ? 0 : subspaces.front().size();
    }
};

struct ClassificationResult {
    std::size_t predicted_index = 0;
    std::string predicted_label;
    /// Summed patch distances per class, in label order.
    std::vector<double> class_distances;
    /// patch_distances[c][k]: distance of patch k's feature to the
    /// subspace of class c.
    std::vector<std::vector<double>> patch_distances;
};

/// Nearest-subspace rule: for every class, sum the per-patch distances;
/// predict the class with the smallest sum, breaking ties towards the
/// lower label.  Throws std::invalid_argument when the feature
/// configuration differs from the model's (the message lists the
/// differing fields).
ClassificationResult classify(const FeatureSet& features, const TrainedModel& model);

/// Trains one subspace per (class, patch).  features_per_class[c] holds
/// the feature sets of the training images of labels[c]; every class
/// needs at least one.  labels must be unique and sorted ascending.  All
/// feature sets must share one configuration.  The (class, patch) pairs
/// are independent, so they may be trained on `threads` workers; the
/// result does not depend on the thread count.
TrainedModel train_model(const std::vector<std::string>& labels,
                         const std::vector<std::vector<FeatureSet>>& features_per_class,
                         double variance_keep, std::size_t threads = 1);

/// Labeled holdout sample: the feature set and the index of its true
/// class in the label vector.
struct ValidationSample {
    FeatureSet features;
    std::size_t label_index = 0;
};

/// Trains one model per candidate variance_keep value and returns the
/// smallest candidate attaining the best holdout accuracy.  Throws
/// std::invalid_argument if candidates or validation is empty.
double select_components(const std::vector<std::string>& labels,
                         const std::vector<std::vector<FeatureSet>>& features_per_class,
                         const std::vector<ValidationSample>& validation,
                         const std::vector<double>& candidates);

}  // namespace rcdt

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rcdt/image.hpp"
#include "rcdt/transport.hpp"

namespace rcdt {

/// Per-pixel gradient of an image, same shape as the source.  dx is the
/// horizontal derivative (along columns), dy the vertical one (along
/// rows), both in intensity units per pixel.
struct GradientField {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> gx;
    std::vector<double> gy;

    double dx(std::size_t r, std::size_t c) const { return gx[r * width + c]; }
    double dy(std::size_t r, std::size_t c) const { return gy[r * width + c]; }
};

/// Top-left corner of one square patch.
struct PatchRect {
    std::size_t top = 0;
    std::size_t left = 0;
};

/// Square patches of side `cell` covering an image, laid out on a stride
/// of cell - overlap in both directions.  When the stride does not reach
/// the far edge, a final patch is anchored flush against it, so every
/// pixel belongs to at least one patch.  Patches are ordered row-major by
/// anchor.
class PatchGrid {
public:
    /// Throws std::invalid_argument if cell is zero, overlap >= cell, or
    /// the image is smaller than one cell.
    PatchGrid(std::size_t image_height, std::size_t image_width, std::size_t cell,
              std::size_t overlap);

    std::size_t image_height() const noexcept { return image_height_; }
    std::size_t image_width() const noexcept { return image_width_; }
    std::size_t cell() const noexcept { return cell_; }
    std::size_t overlap() const noexcept { return overlap_; }
    std::size_t patch_count() const noexcept { return patches_.size(); }
    const std::vector<PatchRect>& patches() const noexcept { return patches_; }

    /// Points gathered from every patch: cell * cell.
    std::size_t points_per_patch() const noexcept { return cell_ * cell_; }

    /// True when the patches tile the image exactly once (overlap zero
    /// and cell dividing both dimensions).
    bool is_partition() const noexcept;

private:
    std::size_t image_height_;
    std::size_t image_width_;
    std::size_t cell_;
    std::size_t overlap_;
    std::vector<PatchRect> patches_;
};

PatchGrid build_patch_grid(std::size_t image_height, std::size_t image_width, std::size_t cell,
                           std::size_t overlap);

/// Which pixels of a patch contribute gradient samples.
enum class PatchGather {
    /// Every pixel of the patch.
    all,
    /// Only pixels whose 1-pixel difference stencil stays inside the
    /// patch, i.e. the inner (cell-2) x (cell-2) block.  Requires
    /// cell >= 3.
    interior,
};

/// Everything needed to recompute features compatibly with a trained
/// model.
struct FeatureConfig {
    std::size_t image_height = 0;
    std::size_t image_width = 0;
    std::size_t cell = 4;
    std::size_t overlap = 2;
    std::size_t angles = 8;
    bool log_transform = false;
    PatchGather gather = PatchGather::all;

    bool operator==(const FeatureConfig&) const = default;

    /// Human-readable list of the fields on which *this and other
    /// disagree; empty when equal.
    std::string describe_difference(const FeatureConfig& other) const;

    /// Gradient samples per patch under the configured gather mode.
    std::size_t points_per_patch() const;
};

/// One transform matrix per patch, all with identical shape
/// points_per_patch x angles, in patch order.
struct FeatureSet {
    std::vector<RcdtRepresentation> patches;
    FeatureConfig config;
};

/// Central differences with replicated borders: interior pixels get
/// (next - prev) / 2, border pixels the one-sided difference divided by
/// 2.  Throws std::invalid_argument if either dimension is below 2.
GradientField compute_gradient(const GrayImage& img);

/// Pixelwise log(1 + p).  Compresses dynamic range before gradients are
/// taken; keeps pixels nonnegative.
GrayImage log_preprocess(const GrayImage& img);

/// Planar measure of the gradient vectors gathered from patch k of the
/// grid, in row-major pixel order.  Throws std::invalid_argument if the
/// field shape does not match the grid, k is out of range, or gather is
/// interior with cell < 3.
Distribution2D patch_distribution(const GradientField& field, const PatchGrid& grid, std::size_t k,
                                  PatchGather gather = PatchGather::all);

/// Full pipeline: optional log transform, gradient, one transform matrix
/// per patch.  The returned config records exactly what was done.
FeatureSet extract_features(const GrayImage& img, const PatchGrid& grid, const AngleGrid& angles,
                            bool log_transform = false, PatchGather gather = PatchGather::all);

}  // namespace rcdt

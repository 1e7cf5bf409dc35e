#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rcdt/features.hpp"
#include "rcdt/image.hpp"
#include "rcdt/transport.hpp"

namespace rcdt {

/// Brightness model applied to a whole image or one patch:
/// out = alpha * in + beta + b . x, where x is the pixel position in
/// normalized coordinates (column / width, row / height).
struct GlobalIlluminationParams {
    double alpha = 1.0;
    double beta = 0.0;
    Point2 b{};

    /// Throws std::invalid_argument if alpha <= 0 or any field is
    /// non-finite.
    GlobalIlluminationParams(double alpha, double beta, Point2 b);
    GlobalIlluminationParams() = default;
};

/// One entry per patch of a zero-overlap grid, in patch order.
using PatchIlluminationParams = std::vector<GlobalIlluminationParams>;

/// Result of applying a brightness model.  Pixels that the model would
/// push below zero are clamped to zero and counted.
struct IlluminatedImage {
    GrayImage image;
    std::size_t clamped_pixels = 0;
};

IlluminatedImage apply_global_illumination(const GrayImage& img,
                                           const GlobalIlluminationParams& params);

/// Applies params[k] to the pixels of patch k.  The grid must partition
/// the image (overlap zero, cell dividing both dimensions); otherwise a
/// pixel would receive two conflicting models and std::invalid_argument
/// is thrown.  params.size() must equal the patch count.
IlluminatedImage apply_patch_illumination(const GrayImage& img, const PatchGrid& grid,
                                          const PatchIlluminationParams& params);

/// Closed parameter intervals to draw from.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct SamplingRanges {
    Interval alpha{0.1, 3.0};
    Interval beta{1.0, 30.0};
    Interval b{0.1, 3.0};  // applied to both components
};

/// Draws `count` independent parameter sets, uniformly per interval.
/// The sequence is a pure function of (seed, count prefix): the first k
/// draws agree for any two calls with the same seed.  Throws
/// std::invalid_argument on an empty interval (lo > hi) or alpha.lo <= 0.
std::vector<GlobalIlluminationParams> sample_illumination(const SamplingRanges& ranges,
                                                          std::size_t count, std::uint64_t seed);

}  // namespace rcdt

#include "rcdt/illumination.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rcdt/rng.hpp"

namespace rcdt {

namespace {

double shade(double value, double xn, double yn, const GlobalIlluminationParams& p,
             std::size_t& clamped) {
    double out = p.alpha * value + p.beta + p.b.x * xn + p.b.y * yn;
    if (out < 0.0) {
        ++clamped;
        return 0.0;
    }
    return out;
}

}  // namespace

GlobalIlluminationParams::GlobalIlluminationParams(double alpha_in, double beta_in, Point2 b_in)
    : alpha(alpha_in), beta(beta_in), b(b_in) {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw std::invalid_argument("illumination gain must be positive and finite");
    }
    if (!std::isfinite(beta) || !std::isfinite(b.x) || !std::isfinite(b.y)) {
        throw std::invalid_argument("illumination offsets must be finite");
    }
}

IlluminatedImage apply_global_illumination(const GrayImage& img,
                                           const GlobalIlluminationParams& params) {
    std::size_t h = img.height();
    std::size_t w = img.width();
    std::vector<double> out(h * w);
    std::size_t clamped = 0;
    for (std::size_t r = 0; r < h; ++r) {
        double yn = static_cast<double>(r) / static_cast<double>(h);
        for (std::size_t c = 0; c < w; ++c) {
            double xn = static_cast<double>(c) / static_cast<double>(w);
            out[r * w + c] = shade(img.at(r, c), xn, yn, params, clamped);
        }
    }
    return IlluminatedImage{GrayImage(h, w, std::move(out)), clamped};
}

IlluminatedImage apply_patch_illumination(const GrayImage& img, const PatchGrid& grid,
                                          const PatchIlluminationParams& params) {
    if (img.height() != grid.image_height() || img.width() != grid.image_width()) {
        throw std::invalid_argument("image shape does not match the patch grid");
    }
    if (!grid.is_partition()) {
        throw std::invalid_argument(
            "patch-wise illumination needs a partitioning grid: overlap zero and cell dividing "
            "both image dimensions");
    }
    if (params.size() != grid.patch_count()) {
        throw std::invalid_argument("got " + std::to_string(params.size()) +
                                    " parameter sets for " + std::to_string(grid.patch_count()) +
                                    " patches");
    }
    std::size_t h = img.height();
    std::size_t w = img.width();
    std::vector<double> out(h * w);
    std::size_t clamped = 0;
    for (std::size_t k = 0; k < grid.patch_count(); ++k) {
        const PatchRect& rect = grid.patches()[k];
        for (std::size_t r = rect.top; r < rect.top + grid.cell(); ++r) {
            double yn = static_cast<double>(r) / static_cast<double>(h);
            for (std::size_t c = rect.left; c < rect.left + grid.cell(); ++c) {
                double xn = static_cast<double>(c) / static_cast<double>(w);
                out[r * w + c] = shade(img.at(r, c), xn, yn, params[k], clamped);
            }
        }
    }
    return IlluminatedImage{GrayImage(h, w, std::move(out)), clamped};
}

std::vector<GlobalIlluminationParams> sample_illumination(const SamplingRanges& ranges,
                                                          std::size_t count, std::uint64_t seed) {
    auto check = [](const Interval& iv, const char* name) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
            throw std::invalid_argument(std::string("empty or non-finite interval for ") + name);
        }
    };
    check(ranges.alpha, "alpha");
    check(ranges.beta, "beta");
    check(ranges.b, "b");
    if (ranges.alpha.lo <= 0.0) {
        throw std::invalid_argument("alpha interval must stay positive");
    }
    std::vector<GlobalIlluminationParams> out;
    out.reserve(count);
    CounterRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        double alpha = rng.uniform(ranges.alpha.lo, ranges.alpha.hi);
        double beta = rng.uniform(ranges.beta.lo, ranges.beta.hi);
        double bx = rng.uniform(ranges.b.lo, ranges.b.hi);
        double by = rng.uniform(ranges.b.lo, ranges.b.hi);
        out.emplace_back(alpha, beta, Point2{bx, by});
    }
    return out;
}

}  // namespace rcdt

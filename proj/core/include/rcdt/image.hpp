#pragma once

#include <cstddef>
#include <vector>

namespace rcdt {

/// Grayscale image with nonnegative real-valued pixels, stored row-major.
/// Pixel (r, c) lives at index r * width + c.
class GrayImage {
public:
    /// Throws std::invalid_argument if either dimension is zero, the
    /// pixel count does not match, or a pixel is negative or non-finite.
    GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels);

    static GrayImage filled(std::size_t height, std::size_t width, double value);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    double at(std::size_t r, std::size_t c) const { return pixels_[r * width_ + c]; }
    const std::vector<double>& pixels() const noexcept { return pixels_; }

private:
    std::size_t height_;
    std::size_t width_;
    std::vector<double> pixels_;
};

}  // namespace rcdt

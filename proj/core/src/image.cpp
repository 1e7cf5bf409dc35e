#include "rcdt/image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcdt {

GrayImage::GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
    if (height_ == 0 || width_ == 0) {
        throw std::invalid_argument("GrayImage dimensions must be positive");
    }
    if (pixels_.size() != height_ * width_) {
        throw std::invalid_argument("GrayImage pixel count " + std::to_string(pixels_.size()) +
                                    " does not match " + std::to_string(height_) + "x" +
                                    std::to_string(width_));
    }
    for (double p : pixels_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("GrayImage pixels must be finite and nonnegative");
        }
    }
}

GrayImage GrayImage::filled(std::size_t height, std::size_t width, double value) {
    return GrayImage(height, width, std::vector<double>(height * width, value));
}

}  // namespace rcdt

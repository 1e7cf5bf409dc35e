#include "rcdt/features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcdt {

namespace {

std::vector<std::size_t> anchors_along(std::size_t extent, std::size_t cell, std::size_t stride) {
    std::vector<std::size_t> anchors;
    for (std::size_t a = 0;; a += stride) {
        if (a + cell >= extent) {
            anchors.push_back(extent - cell);
            break;
        }
        anchors.push_back(a);
    }
    return anchors;
}

}  // namespace

PatchGrid::PatchGrid(std::size_t image_height, std::size_t image_width, std::size_t cell,
                     std::size_t overlap)
    : image_height_(image_height), image_width_(image_width), cell_(cell), overlap_(overlap) {
    if (cell_ < 2) {
        throw std::invalid_argument("patch cell size must be at least 2, got " +
                                    std::to_string(cell_));
    }
    if (overlap_ >= cell_) {
        throw std::invalid_argument("patch overlap " + std::to_string(overlap_) +
                                    " must be smaller than the cell size " + std::to_string(cell_));
    }
    if (image_height_ < cell_ || image_width_ < cell_) {
        throw std::invalid_argument("image " + std::to_string(image_height_) + "x" +
                                    std::to_string(image_width_) +
                                    " is smaller than one patch cell of side " +
                                    std::to_string(cell_));
    }
    std::size_t stride = cell_ - overlap_;
    std::vector<std::size_t> rows = anchors_along(image_height_, cell_, stride);
    std::vector<std::size_t> cols = anchors_along(image_width_, cell_, stride);
    patches_.reserve(rows.size() * cols.size());
    for (std::size_t r : rows) {
        for (std::size_t c : cols) {
            patches_.push_back(PatchRect{r, c});
        }
    }
}

bool PatchGrid::is_partition() const noexcept {
    return overlap_ == 0 && image_height_ % cell_ == 0 && image_width_ % cell_ == 0;
}

PatchGrid build_patch_grid(std::size_t image_height, std::size_t image_width, std::size_t cell,
                           std::size_t overlap) {
    return PatchGrid(image_height, image_width, cell, overlap);
}

std::string FeatureConfig::describe_difference(const FeatureConfig& other) const {
    std::string out;
    auto add = [&out](const std::string& field, const std::string& lhs, const std::string& rhs) {
        if (!out.empty()) out += ", ";
        out += field + " " + lhs + " vs " + rhs;
    };
    if (image_height != other.image_height || image_width != other.image_width) {
        add("image size", std::to_string(image_height) + "x" + std::to_string(image_width),
            std::to_string(other.image_height) + "x" + std::to_string(other.image_width));
    }
    if (cell != other.cell) add("cell", std::to_string(cell), std::to_string(other.cell));
    if (overlap != other.overlap)
        add("overlap", std::to_string(overlap), std::to_string(other.overlap));
    if (angles != other.angles) add("angles", std::to_string(angles), std::to_string(other.angles));
    if (log_transform != other.log_transform) {
        add("log-transform", log_transform ? "on" : "off", other.log_transform ? "on" : "off");
    }
    if (gather != other.gather) {
        add("gather", gather == PatchGather::all ? "all" : "interior",
            other.gather == PatchGather::all ? "all" : "interior");
    }
    return out;
}

std::size_t FeatureConfig::points_per_patch() const {
    if (gather == PatchGather::interior) {
        if (cell < 3) {
            throw std::invalid_argument("interior gather needs a cell size of at least 3");
        }
        return (cell - 2) * (cell - 2);
    }
    return cell * cell;
}

GradientField compute_gradient(const GrayImage& img) {
    std::size_t h = img.height();
    std::size_t w = img.width();
    if (h < 2 || w < 2) {
        throw std::invalid_argument("gradient needs an image of at least 2x2 pixels");
    }
    GradientField f;
    f.height = h;
    f.width = w;
    f.gx.resize(h * w);
    f.gy.resize(h * w);
    for (std::size_t r = 0; r < h; ++r) {
        std::size_t rm = r == 0 ? 0 : r - 1;
        std::size_t rp = r + 1 == h ? r : r + 1;
        for (std::size_t c = 0; c < w; ++c) {
            std::size_t cm = c == 0 ? 0 : c - 1;
            std::size_t cp = c + 1 == w ? c : c + 1;
            f.gx[r * w + c] = (img.at(r, cp) - img.at(r, cm)) / 2.0;
            f.gy[r * w + c] = (img.at(rp, c) - img.at(rm, c)) / 2.0;
        }
    }
    return f;
}

GrayImage log_preprocess(const GrayImage& img) {
    std::vector<double> out(img.pixels().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::log1p(img.pixels()[i]);
    }
    return GrayImage(img.height(), img.width(), std::move(out));
}

Distribution2D patch_distribution(const GradientField& field, const PatchGrid& grid, std::size_t k,
                                  PatchGather gather) {
    if (field.height != grid.image_height() || field.width != grid.image_width()) {
        throw std::invalid_argument("gradient field shape does not match the patch grid");
    }
    if (k >= grid.patch_count()) {
        throw std::invalid_argument("patch index " + std::to_string(k) + " out of range, grid has " +
                                    std::to_string(grid.patch_count()) + " patches");
    }
    std::size_t margin = 0;
    if (gather == PatchGather::interior) {
        if (grid.cell() < 3) {
            throw std::invalid_argument("interior gather needs a cell size of at least 3");
        }
        margin = 1;
    }
    const PatchRect& rect = grid.patches()[k];
    std::size_t side = grid.cell() - 2 * margin;
    std::vector<Point2> points;
    points.reserve(side * side);
    for (std::size_t r = rect.top + margin; r < rect.top + grid.cell() - margin; ++r) {
        for (std::size_t c = rect.left + margin; c < rect.left + grid.cell() - margin; ++c) {
            points.push_back(Point2{field.dx(r, c), field.dy(r, c)});
        }
    }
    return Distribution2D(std::move(points));
}

FeatureSet extract_features(const GrayImage& img, const PatchGrid& grid, const AngleGrid& angles,
                            bool log_transform, PatchGather gather) {
    if (img.height() != grid.image_height() || img.width() != grid.image_width()) {
        throw std::invalid_argument("image " + std::to_string(img.height()) + "x" +
                                    std::to_string(img.width()) + " does not match the patch grid " +
                                    std::to_string(grid.image_height()) + "x" +
                                    std::to_string(grid.image_width()));
    }
    GradientField field =
        log_transform ? compute_gradient(log_preprocess(img)) : compute_gradient(img);
    FeatureSet fs;
    fs.patches.reserve(grid.patch_count());
    for (std::size_t k = 0; k < grid.patch_count(); ++k) {
        fs.patches.push_back(discrete_rcdt(patch_distribution(field, grid, k, gather), angles));
    }
    fs.config = FeatureConfig{img.height(),  img.width(),   grid.cell(), grid.overlap(),
                              angles.count(), log_transform, gather};
    return fs;
}

}  // namespace rcdt

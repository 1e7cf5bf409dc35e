#include "rcdt/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rcdt {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + " contains a non-finite value");
        }
    }
}

}  // namespace

Distribution1D::Distribution1D(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw std::invalid_argument("Distribution1D needs at least one support point");
    }
    require_finite(points_, "Distribution1D support");
}

Distribution2D::Distribution2D(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw std::invalid_argument("Distribution2D needs at least one support point");
    }
    for (const Point2& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw std::invalid_argument("Distribution2D support contains a non-finite point");
        }
    }
}

CdtVector::CdtVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("CdtVector needs at least one entry");
    }
    require_finite(values_, "CdtVector");
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (values_[i] < values_[i - 1]) {
            throw std::invalid_argument("CdtVector entries must be nondecreasing");
        }
    }
}

AngleGrid::AngleGrid(std::size_t count) {
    if (count == 0) {
        throw std::invalid_argument("AngleGrid needs at least one angle");
    }
    angles_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        angles_[i] = static_cast<double>(i) * std::numbers::pi / static_cast<double>(count);
    }
}

Point2 AngleGrid::direction(std::size_t i) const {
    return Point2{std::cos(angles_[i]), std::sin(angles_[i])};
}

RcdtRepresentation::RcdtRepresentation(std::size_t rows, std::size_t cols,
                                       std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (rows_ == 0 || cols_ == 0) {
        throw std::invalid_argument("RcdtRepresentation shape must be positive");
    }
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("RcdtRepresentation data size does not match shape");
    }
    require_finite(data_, "RcdtRepresentation");
    for (std::size_t j = 0; j < cols_; ++j) {
        for (std::size_t i = 1; i < rows_; ++i) {
            if (data_[j * rows_ + i] < data_[j * rows_ + i - 1]) {
                throw std::invalid_argument("RcdtRepresentation column " + std::to_string(j) +
                                            " is not nondecreasing");
            }
        }
    }
}

AffineDeformation::AffineDeformation(double alpha_in, Point2 b_in) : alpha(alpha_in), b(b_in) {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
        throw std::invalid_argument("AffineDeformation scale must be positive and finite");
    }
    if (!std::isfinite(b.x) || !std::isfinite(b.y)) {
        throw std::invalid_argument("AffineDeformation shift must be finite");
    }
}

MonotoneMap1D::MonotoneMap1D(std::vector<double> breakpoints, std::vector<double> values)
    : xs_(std::move(breakpoints)), ys_(std::move(values)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2) {
        throw std::invalid_argument("MonotoneMap1D needs matching breakpoint/value lists of size >= 2");
    }
    require_finite(xs_, "MonotoneMap1D breakpoints");
    require_finite(ys_, "MonotoneMap1D values");
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (xs_[i] <= xs_[i - 1]) {
            throw std::invalid_argument("MonotoneMap1D breakpoints must be strictly increasing");
        }
        if (ys_[i] <= ys_[i - 1]) {
            throw std::invalid_argument("MonotoneMap1D values must be strictly increasing");
        }
    }
}

double MonotoneMap1D::operator()(double x) const {
    // Find the segment containing x; clamp to the end segments outside
    // the breakpoint range.
    std::size_t hi = xs_.size() - 1;
    std::size_t lo;
    if (x <= xs_.front()) {
        lo = 0;
    } else if (x >= xs_[hi - 1]) {
        lo = hi - 1;
    } else {
        lo = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) - 1;
    }
    double slope = (ys_[lo + 1] - ys_[lo]) / (xs_[lo + 1] - xs_[lo]);
    return ys_[lo] + slope * (x - xs_[lo]);
}

MonotoneMap1D MonotoneMap1D::affine(double slope, double offset) {
    if (!std::isfinite(slope) || slope <= 0.0 || !std::isfinite(offset)) {
        throw std::invalid_argument("affine map needs a positive finite slope and finite offset");
    }
    return MonotoneMap1D({0.0, 1.0}, {offset, slope + offset});
}

MonotoneMap1D MonotoneMap1D::convex_combination(const MonotoneMap1D& a, const MonotoneMap1D& b,
                                                double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("convex_combination weight must lie in [0, 1]");
    }
    // Piecewise-linear in between the union of both breakpoint sets, so
    // evaluating the blend there reproduces it exactly.
    std::vector<double> xs;
    xs.reserve(a.xs_.size() + b.xs_.size());
    std::merge(a.xs_.begin(), a.xs_.end(), b.xs_.begin(), b.xs_.end(), std::back_inserter(xs));
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ys[i] = lambda * a(xs[i]) + (1.0 - lambda) * b(xs[i]);
    }
    return MonotoneMap1D(std::move(xs), std::move(ys));
}

CdtVector discrete_cdt(const Distribution1D& d) {
    std::vector<double> sorted = d.points();
    std::sort(sorted.begin(), sorted.end());
    return CdtVector(std::move(sorted));
}

double wasserstein_1d(const Distribution1D& a, const Distribution1D& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("wasserstein_1d needs equal-size distributions, got " +
                                    std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    CdtVector ta = discrete_cdt(a);
    CdtVector tb = discrete_cdt(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        double gap = ta[i] - tb[i];
        sum += gap * gap;
    }
    return std::sqrt(sum / static_cast<double>(ta.size()));
}

Distribution1D push_forward_1d(const Distribution1D& d, const MonotoneMap1D& map) {
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        out[i] = map(d.points()[i]);
    }
    return Distribution1D(std::move(out));
}

Distribution2D push_forward_affine_2d(const Distribution2D& d, const AffineDeformation& h) {
    std::vector<Point2> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Point2& z = d.points()[i];
        out[i] = Point2{h.alpha * z.x + h.b.x, h.alpha * z.y + h.b.y};
    }
    return Distribution2D(std::move(out));
}

Distribution1D project(const Distribution2D& d, double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("projection angle must be finite");
    }
    double wx = std::cos(theta);
    double wy = std::sin(theta);
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        out[i] = d.points()[i].x * wx + d.points()[i].y * wy;
    }
    return Distribution1D(std::move(out));
}

RcdtRepresentation discrete_rcdt(const Distribution2D& d, const AngleGrid& grid) {
    std::size_t n = d.size();
    std::size_t m = grid.count();
    std::vector<double> data(n * m);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < m; ++j) {
        Point2 w = grid.direction(j);
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = d.points()[i].x * w.x + d.points()[i].y * w.y;
        }
        std::sort(column.begin(), column.end());
        std::copy(column.begin(), column.end(), data.begin() + static_cast<std::ptrdiff_t>(j * n));
    }
    return RcdtRepresentation(n, m, std::move(data));
}

std::vector<double> flatten(const RcdtRepresentation& r) {
    return r.data();
}

RcdtRepresentation unflatten(const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
    return RcdtRepresentation(rows, cols, flat);
}

double sliced_wasserstein(const RcdtRepresentation& a, const RcdtRepresentation& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("sliced_wasserstein needs matching shapes, got " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " and " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        double gap = a.data()[i] - b.data()[i];
        sum += gap * gap;
    }
    return std::sqrt(sum);
}

}  // namespace rcdt

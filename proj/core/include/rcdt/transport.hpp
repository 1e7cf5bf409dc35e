#pragma once

#include <cstddef>
#include <vector>

namespace rcdt {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Discrete probability measure on the line with N support points, each
/// carrying mass 1/N.  Repeated locations are allowed; the point order is
/// preserved as given.
class Distribution1D {
public:
    /// Throws std::invalid_argument if points is empty or contains a
    /// non-finite value.
    explicit Distribution1D(std::vector<double> points);

    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

private:
    std::vector<double> points_;
};

/// Discrete uniform-mass measure on the plane.
class Distribution2D {
public:
    explicit Distribution2D(std::vector<Point2> points);

    const std::vector<Point2>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

private:
    std::vector<Point2> points_;
};

/// Transform of a Distribution1D: its support sorted in nondecreasing
/// order.  Equivalently, entry i is the (i + 0.5)/N quantile of the
/// measure, so two transforms can be compared entrywise.
class CdtVector {
public:
    /// Throws std::invalid_argument unless values is nonempty, finite and
    /// nondecreasing.
    explicit CdtVector(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

/// Uniform grid of m projection angles theta_i = i * pi / m, covering
/// [0, pi).  Antipodal directions carry the same information, so the
/// half-open half circle is enough.
class AngleGrid {
public:
    /// Throws std::invalid_argument if count is zero.
    explicit AngleGrid(std::size_t count);

    std::size_t count() const noexcept { return angles_.size(); }
    double angle(std::size_t i) const { return angles_[i]; }
    const std::vector<double>& angles() const noexcept { return angles_; }

    /// Unit direction (cos theta_i, sin theta_i).
    Point2 direction(std::size_t i) const;

private:
    std::vector<double> angles_;
};

/// N x m matrix whose column j is the transform of the projection of a
/// planar measure onto angle j: sorted projections, one column per angle.
/// Stored column-major.
class RcdtRepresentation {
public:
    /// Throws std::invalid_argument unless data has rows * cols finite
    /// entries, rows and cols are positive, and every column is
    /// nondecreasing.
    RcdtRepresentation(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double at(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Planar similarity without rotation: z -> alpha * z + b with alpha > 0.
struct AffineDeformation {
    /// Throws std::invalid_argument if alpha <= 0 or any component is
    /// non-finite.
    AffineDeformation(double alpha, Point2 b);

    double alpha;
    Point2 b;
};

/// Strictly increasing piecewise-linear map of the line, defined by
/// breakpoints and their images.  Outside the breakpoint range the first
/// and last segment slopes are extended.
class MonotoneMap1D {
public:
    /// Throws std::invalid_argument unless both vectors have the same
    /// size >= 2, are finite, and are strictly increasing.
    MonotoneMap1D(std::vector<double> breakpoints, std::vector<double> values);

    double operator()(double x) const;

    const std::vector<double>& breakpoints() const noexcept { return xs_; }
    const std::vector<double>& values() const noexcept { return ys_; }

    /// x -> slope * x + offset with slope > 0.
    static MonotoneMap1D affine(double slope, double offset);

    /// Pointwise blend lambda * a + (1 - lambda) * b, lambda in [0, 1].
    /// The blend of increasing maps is again increasing.
    static MonotoneMap1D convex_combination(const MonotoneMap1D& a, const MonotoneMap1D& b,
                                            double lambda);

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// Transform of a 1-d measure: sorted copy of its support.
CdtVector discrete_cdt(const Distribution1D& d);

/// 2-Wasserstein distance between uniform-mass measures of equal size:
/// sqrt of the mean squared gap between their transforms.  Throws
/// std::invalid_argument on size mismatch.
double wasserstein_1d(const Distribution1D& a, const Distribution1D& b);

/// Pushes each support point through a monotone map.
Distribution1D push_forward_1d(const Distribution1D& d, const MonotoneMap1D& map);

/// Applies z -> alpha * z + b to each support point.
Distribution2D push_forward_affine_2d(const Distribution2D& d, const AffineDeformation& h);

/// Projects a planar measure onto the direction with angle theta,
/// yielding the 1-d measure of inner products.
Distribution1D project(const Distribution2D& d, double theta);

/// Stacks the transforms of all angle projections into an N x m matrix.
RcdtRepresentation discrete_rcdt(const Distribution2D& d, const AngleGrid& grid);

/// Column-major copy of the matrix entries, suitable for treating the
/// representation as a single vector in R^(N*m).
std::vector<double> flatten(const RcdtRepresentation& r);

/// Inverse of flatten given the original shape.  Throws
/// std::invalid_argument if flat.size() != rows * cols or a column fails
/// the monotonicity invariant.
RcdtRepresentation unflatten(const std::vector<double>& flat, std::size_t rows, std::size_t cols);

/// Euclidean distance between the flattened representations.  Equals the
/// sliced transport cost between the underlying planar measures up to the
/// fixed angle discretisation.  Throws std::invalid_argument on shape
/// mismatch.
double sliced_wasserstein(const RcdtRepresentation& a, const RcdtRepresentation& b);

}  // namespace rcdt

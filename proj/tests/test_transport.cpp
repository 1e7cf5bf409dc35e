#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rcdt/transport.hpp"

using namespace rcdt;

TEST_CASE("discrete transform sorts the support") {
    Distribution1D d({3.0, 1.0, 2.0});
    CdtVector t = discrete_cdt(d);
    CHECK(t.values() == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("discrete transform keeps repeated locations") {
    CdtVector t = discrete_cdt(Distribution1D({2.0, 2.0, -1.0}));
    CHECK(t.values() == std::vector<double>{-1.0, 2.0, 2.0});
}

TEST_CASE("distributions reject empty or non-finite support") {
    CHECK_THROWS_AS(Distribution1D({}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution1D({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution2D({}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution2D({Point2{0.0, std::numeric_limits<double>::infinity()}}),
                    std::invalid_argument);
}

TEST_CASE("transform vector validates monotonicity") {
    CHECK_THROWS_AS(CdtVector({2.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(CdtVector({1.0, 1.0, 2.0}));
    CHECK_THROWS_AS(CdtVector({}), std::invalid_argument);
}

TEST_CASE("unit-shifted singletons are at unit distance") {
    CHECK(wasserstein_1d(Distribution1D({0.0, 1.0}), Distribution1D({1.0, 2.0})) == 1.0);
}

TEST_CASE("distance vanishes exactly on equal multisets") {
    Distribution1D a({3.0, -1.0, 2.0});
    Distribution1D b({2.0, 3.0, -1.0});
    CHECK(wasserstein_1d(a, b) == 0.0);
}

TEST_CASE("distance rejects a size mismatch") {
    CHECK_THROWS_AS(wasserstein_1d(Distribution1D({1.0}), Distribution1D({1.0, 2.0})),
                    std::invalid_argument);
}

TEST_CASE("angle grid covers the half circle uniformly") {
    AngleGrid grid(4);
    REQUIRE(grid.count() == 4);
    CHECK(grid.angle(0) == 0.0);
    CHECK(grid.angle(1) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    CHECK(grid.angle(3) == doctest::Approx(3 * std::numbers::pi / 4).epsilon(1e-15));
    for (std::size_t i = 0; i < grid.count(); ++i) {
        CHECK(grid.angle(i) < std::numbers::pi);
        if (i > 0) CHECK(grid.angle(i) > grid.angle(i - 1));
    }
    CHECK_THROWS_AS(AngleGrid(0), std::invalid_argument);
}

TEST_CASE("angle grid directions are unit vectors") {
    AngleGrid grid(8);
    for (std::size_t i = 0; i < grid.count(); ++i) {
        Point2 w = grid.direction(i);
        CHECK(std::hypot(w.x, w.y) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("projection is the inner product with the direction") {
    Distribution2D d({Point2{3.0, 4.0}});
    CHECK(project(d, 0.0).points()[0] == 3.0);
    // cos(pi/2) is not exactly zero in floating point.
    CHECK(project(d, std::numbers::pi / 2).points()[0] == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("planar transform stacks sorted projections per angle") {
    Distribution2D d({Point2{1.0, 0.0}, Point2{0.0, 0.0}});
    AngleGrid grid(2);
    RcdtRepresentation r = discrete_rcdt(d, grid);
    REQUIRE(r.rows() == 2);
    REQUIRE(r.cols() == 2);
    // Angle 0 projects onto x, sorted ascending.
    CHECK(r.at(0, 0) == 0.0);
    CHECK(r.at(1, 0) == 1.0);
    // Angle pi/2 projects onto y.
    CHECK(r.at(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.at(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("representation validates shape and column order") {
    CHECK_THROWS_AS(RcdtRepresentation(0, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(RcdtRepresentation(2, 1, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(RcdtRepresentation(2, 1, {2.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(RcdtRepresentation(2, 2, {1.0, 2.0, -4.0, 0.0}));
}

TEST_CASE("flatten and unflatten are inverse given the shape") {
    Distribution2D d({Point2{1.0, 2.0}, Point2{-1.0, 0.5}, Point2{0.0, 0.0}});
    AngleGrid grid(3);
    RcdtRepresentation r = discrete_rcdt(d, grid);
    std::vector<double> flat = flatten(r);
    REQUIRE(flat.size() == 9);
    RcdtRepresentation back = unflatten(flat, 3, 3);
    CHECK(back.data() == r.data());
    CHECK_THROWS_AS(unflatten(flat, 2, 3), std::invalid_argument);
}

TEST_CASE("flattening is column-major") {
    RcdtRepresentation r(2, 2, {1.0, 2.0, 10.0, 20.0});
    CHECK(r.at(0, 0) == 1.0);
    CHECK(r.at(1, 0) == 2.0);
    CHECK(r.at(0, 1) == 10.0);
    CHECK(r.at(1, 1) == 20.0);
    CHECK(flatten(r) == std::vector<double>{1.0, 2.0, 10.0, 20.0});
}

// For a pure translation by b, column j of the transform shifts by
// b . (cos theta_j, sin theta_j), so the squared distance is
// N * sum_j cos(j pi / m)^2 = N * m / 2 for b = (1, 0).  With N = 4 and
// m = 4 that is sqrt(8).
TEST_CASE("translation distance matches the closed form") {
    std::vector<Point2> points{Point2{0.0, 0.0}, Point2{1.0, 0.5}, Point2{-0.5, 2.0},
                               Point2{0.25, -1.0}};
    Distribution2D d(points);
    std::vector<Point2> moved = points;
    for (Point2& p : moved) p.x += 1.0;
    AngleGrid grid(4);
    RcdtRepresentation a = discrete_rcdt(d, grid);
    RcdtRepresentation b = discrete_rcdt(Distribution2D(moved), grid);
    CHECK(sliced_wasserstein(a, b) == doctest::Approx(2.8284271247461903).epsilon(1e-12));
}

// The closed form behind the frozen value above.
TEST_CASE("squared cosines over the angle grid sum to m/2") {
    for (std::size_t m = 2; m <= 16; ++m) {
        AngleGrid grid(m);
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            sum += grid.direction(j).x * grid.direction(j).x;
        }
        CHECK(sum == doctest::Approx(static_cast<double>(m) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("sliced distance rejects shape mismatches") {
    RcdtRepresentation a(1, 1, {0.0});
    RcdtRepresentation b(1, 2, {0.0, 0.0});
    CHECK_THROWS_AS(sliced_wasserstein(a, b), std::invalid_argument);
}

TEST_CASE("sliced distance is zero exactly on identical representations") {
    Distribution2D d({Point2{1.0, 2.0}, Point2{-3.0, 0.5}});
    AngleGrid grid(5);
    RcdtRepresentation r = discrete_rcdt(d, grid);
    CHECK(sliced_wasserstein(r, r) == 0.0);
}

TEST_CASE("monotone map evaluates and extrapolates segments") {
    MonotoneMap1D map({0.0, 1.0, 3.0}, {0.0, 2.0, 4.0});
    CHECK(map(0.0) == 0.0);
    CHECK(map(1.0) == 2.0);
    CHECK(map(0.5) == 1.0);
    CHECK(map(2.0) == 3.0);
    // Beyond the breakpoints the end slopes continue.
    CHECK(map(-1.0) == -2.0);
    CHECK(map(5.0) == 6.0);
}

TEST_CASE("monotone map validates its description") {
    CHECK_THROWS_AS(MonotoneMap1D({0.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap1D({0.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap1D({0.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap1D({0.0, 1.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("affine helper and convex blends") {
    MonotoneMap1D f = MonotoneMap1D::affine(2.0, 1.0);
    CHECK(f(3.0) == 7.0);
    CHECK_THROWS_AS(MonotoneMap1D::affine(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap1D::affine(-1.0, 0.0), std::invalid_argument);

    MonotoneMap1D g = MonotoneMap1D::affine(4.0, 0.0);
    MonotoneMap1D blend = MonotoneMap1D::convex_combination(f, g, 0.5);
    CHECK(blend(1.0) == 0.5 * f(1.0) + 0.5 * g(1.0));
    CHECK(blend(-2.0) == 0.5 * f(-2.0) + 0.5 * g(-2.0));
    CHECK_THROWS_AS(MonotoneMap1D::convex_combination(f, g, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(MonotoneMap1D::convex_combination(f, g, -0.1), std::invalid_argument);
}

TEST_CASE("push-forward composes with the transform exactly") {
    Distribution1D d({0.5, -2.0, 3.0, 0.5});
    MonotoneMap1D map({-4.0, 0.0, 4.0}, {-2.0, 1.0, 9.0});
    CdtVector lhs = discrete_cdt(push_forward_1d(d, map));
    CdtVector base = discrete_cdt(d);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(lhs[i] == map(base[i]));
    }
}

TEST_CASE("translation and scaling act entrywise on the transform") {
    Distribution1D d({2.0, -1.0, 0.25});
    CdtVector base = discrete_cdt(d);

    std::vector<double> shifted = d.points();
    for (double& p : shifted) p += 0.75;
    CdtVector ts = discrete_cdt(Distribution1D(shifted));
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(ts[i] == base[i] + 0.75);
    }

    std::vector<double> scaled = d.points();
    for (double& p : scaled) p *= 2.0;
    CdtVector sc = discrete_cdt(Distribution1D(scaled));
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(sc[i] == base[i] * 2.0);
    }
}

TEST_CASE("planar push-forward scales and shifts points") {
    AffineDeformation h(2.0, Point2{1.0, -1.0});
    Distribution2D d({Point2{1.0, 2.0}});
    Distribution2D moved = push_forward_affine_2d(d, h);
    CHECK(moved.points()[0].x == 3.0);
    CHECK(moved.points()[0].y == 3.0);
    CHECK_THROWS_AS(AffineDeformation(0.0, Point2{}), std::invalid_argument);
    CHECK_THROWS_AS(AffineDeformation(-2.0, Point2{}), std::invalid_argument);
}

// Scale alpha and shift b move column j to alpha * column + b . w_j.
TEST_CASE("planar transform is covariant under scale and shift") {
    Distribution2D d({Point2{0.5, -1.0}, Point2{2.0, 0.25}, Point2{-1.5, 1.0}});
    AngleGrid grid(6);
    AffineDeformation h(1.75, Point2{0.5, -2.0});
    RcdtRepresentation moved = discrete_rcdt(push_forward_affine_2d(d, h), grid);
    RcdtRepresentation base = discrete_rcdt(d, grid);
    for (std::size_t j = 0; j < grid.count(); ++j) {
        Point2 w = grid.direction(j);
        double shift = h.b.x * w.x + h.b.y * w.y;
        for (std::size_t i = 0; i < base.rows(); ++i) {
            CHECK(moved.at(i, j) ==
                  doctest::Approx(h.alpha * base.at(i, j) + shift).epsilon(1e-12));
        }
    }
}

TEST_CASE("singleton measures transform and compare directly") {
    CHECK(discrete_cdt(Distribution1D({5.0})).values() == std::vector<double>{5.0});
    CHECK(wasserstein_1d(Distribution1D({0.0}), Distribution1D({3.5})) == 3.5);
    CHECK(wasserstein_1d(Distribution1D({0.0}), Distribution1D({-2.0})) == 2.0);
}

TEST_CASE("single-point planar measure yields a one-row matrix") {
    Distribution2D d({Point2{2.0, -1.0}});
    AngleGrid grid(5);
    RcdtRepresentation r = discrete_rcdt(d, grid);
    REQUIRE(r.rows() == 1);
    REQUIRE(r.cols() == 5);
    CHECK(flatten(r).size() == 5);
    for (std::size_t j = 0; j < 5; ++j) {
        Point2 w = grid.direction(j);
        CHECK(r.at(0, j) == doctest::Approx(2.0 * w.x - 1.0 * w.y).epsilon(1e-15));
    }
}

TEST_CASE("diagonal projection of the unit cross") {
    Distribution2D d({Point2{1.0, 0.0}, Point2{0.0, 1.0}, Point2{-1.0, 0.0}});
    Distribution1D p = project(d, std::numbers::pi / 4);
    double s = std::sqrt(0.5);
    REQUIRE(p.size() == 3);
    CHECK(p.points()[0] == doctest::Approx(s).epsilon(1e-15));
    CHECK(p.points()[1] == doctest::Approx(s).epsilon(1e-15));
    CHECK(p.points()[2] == doctest::Approx(-s).epsilon(1e-15));
}

TEST_CASE("axis-aligned pair sorts under both grid angles") {
    Distribution2D d({Point2{2.0, 0.0}, Point2{-2.0, 0.0}});
    RcdtRepresentation r = discrete_rcdt(d, AngleGrid(2));
    // Angle 0 projects onto x: sorted [-2, 2].
    CHECK(r.at(0, 0) == -2.0);
    CHECK(r.at(1, 0) == 2.0);
    // Angle pi/2 collapses the pair to (almost) zero.
    CHECK(r.at(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.at(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(r.at(0, 1)) < 1e-15);
}

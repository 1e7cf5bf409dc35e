#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "rcdt/features.hpp"
#include "rcdt/image.hpp"
#include "rcdt/transport.hpp"

using namespace rcdt;

namespace {

GrayImage ramp_image(std::size_t h, std::size_t w) {
    std::vector<double> px(h * w);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c) px[r * w + c] = static_cast<double>(c);
    return GrayImage(h, w, std::move(px));
}

std::vector<std::size_t> row_anchors(const PatchGrid& grid) {
    std::vector<std::size_t> tops;
    for (const PatchRect& p : grid.patches()) {
        if (tops.empty() || tops.back() != p.top) {
            if (std::find(tops.begin(), tops.end(), p.top) == tops.end()) tops.push_back(p.top);
        }
    }
    return tops;
}

}  // namespace

TEST_CASE("gradient of a constant image vanishes") {
    GradientField g = compute_gradient(GrayImage::filled(5, 7, 3.25));
    for (double v : g.gx) CHECK(v == 0.0);
    for (double v : g.gy) CHECK(v == 0.0);
}

TEST_CASE("gradient of a column ramp is one inside and half on the borders") {
    GradientField g = compute_gradient(ramp_image(3, 5));
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(g.dx(r, 0) == 0.5);   // replicated left neighbor
        CHECK(g.dx(r, 4) == 0.5);   // replicated right neighbor
        for (std::size_t c = 1; c < 4; ++c) CHECK(g.dx(r, c) == 1.0);
        for (std::size_t c = 0; c < 5; ++c) CHECK(g.dy(r, c) == 0.0);
    }
}

TEST_CASE("gradient of a plane recovers both slopes in the interior") {
    std::vector<double> px(4 * 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            px[r * 4 + c] = 2.0 * static_cast<double>(r) + 3.0 * static_cast<double>(c) + 5.0;
    GradientField g = compute_gradient(GrayImage(4, 4, std::move(px)));
    for (std::size_t r = 1; r < 3; ++r) {
        for (std::size_t c = 1; c < 3; ++c) {
            CHECK(g.dx(r, c) == 3.0);
            CHECK(g.dy(r, c) == 2.0);
        }
    }
    // Replicated borders give the one-sided difference over two.
    CHECK(g.dx(0, 0) == 1.5);
    CHECK(g.dy(0, 0) == 1.0);
}

TEST_CASE("gradient needs at least two pixels per dimension") {
    CHECK_THROWS_AS(compute_gradient(GrayImage::filled(1, 5, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(compute_gradient(GrayImage::filled(5, 1, 0.0)), std::invalid_argument);
    CHECK_NOTHROW(compute_gradient(GrayImage::filled(2, 2, 0.0)));
}

TEST_CASE("gradient ignores a constant brightness offset on integer images") {
    std::vector<double> base = {0, 7, 3, 9, 2, 5, 8, 1, 6, 4, 11, 10, 12, 15, 13, 14};
    std::vector<double> lifted = base;
    for (double& p : lifted) p += 21.0;
    GradientField g0 = compute_gradient(GrayImage(4, 4, base));
    GradientField g1 = compute_gradient(GrayImage(4, 4, lifted));
    CHECK(g0.gx == g1.gx);
    CHECK(g0.gy == g1.gy);
}

TEST_CASE("log preprocessing maps p to log(1 + p)") {
    GrayImage out = log_preprocess(GrayImage(1, 3, {0.0, std::numbers::e - 1.0, 255.0}));
    CHECK(out.at(0, 0) == 0.0);
    CHECK(out.at(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out.at(0, 2) == doctest::Approx(std::log(256.0)).epsilon(1e-15));
}

TEST_CASE("zero-overlap grid tiles an evenly divisible image") {
    PatchGrid grid(8, 8, 4, 0);
    REQUIRE(grid.patch_count() == 4);
    CHECK(grid.patches()[0].top == 0);
    CHECK(grid.patches()[0].left == 0);
    CHECK(grid.patches()[1].top == 0);
    CHECK(grid.patches()[1].left == 4);
    CHECK(grid.patches()[2].top == 4);
    CHECK(grid.patches()[2].left == 0);
    CHECK(grid.patches()[3].top == 4);
    CHECK(grid.patches()[3].left == 4);
    CHECK(grid.is_partition());
    CHECK(grid.points_per_patch() == 16);
}

TEST_CASE("ragged edge gets a final inward-anchored patch") {
    PatchGrid grid(9, 9, 4, 0);
    REQUIRE(grid.patch_count() == 9);
    CHECK(row_anchors(grid) == std::vector<std::size_t>{0, 4, 5});
    CHECK_FALSE(grid.is_partition());
    // Every pixel is covered by at least one patch.
    std::vector<int> covered(81, 0);
    for (const PatchRect& p : grid.patches())
        for (std::size_t r = p.top; r < p.top + 4; ++r)
            for (std::size_t c = p.left; c < p.left + 4; ++c) ++covered[r * 9 + c];
    for (int c : covered) CHECK(c >= 1);
}

TEST_CASE("overlap shrinks the stride") {
    PatchGrid grid(8, 8, 4, 2);
    REQUIRE(grid.patch_count() == 9);
    CHECK(row_anchors(grid) == std::vector<std::size_t>{0, 2, 4});
    CHECK_FALSE(grid.is_partition());
}

TEST_CASE("grid rejects degenerate geometry") {
    CHECK_THROWS_AS(PatchGrid(8, 8, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(PatchGrid(8, 8, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(PatchGrid(8, 8, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(PatchGrid(8, 8, 4, 5), std::invalid_argument);
    CHECK_THROWS_AS(PatchGrid(3, 8, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(PatchGrid(8, 3, 4, 0), std::invalid_argument);
    CHECK_NOTHROW(PatchGrid(4, 4, 4, 0));
}

TEST_CASE("whole-image patch covers the image exactly once") {
    PatchGrid grid = build_patch_grid(6, 6, 6, 0);
    REQUIRE(grid.patch_count() == 1);
    CHECK(grid.is_partition());
}

TEST_CASE("gather mode decides the points per patch") {
    FeatureConfig cfg;
    cfg.cell = 4;
    cfg.gather = PatchGather::all;
    CHECK(cfg.points_per_patch() == 16);
    cfg.gather = PatchGather::interior;
    CHECK(cfg.points_per_patch() == 4);
    cfg.cell = 2;
    CHECK_THROWS_AS(cfg.points_per_patch(), std::invalid_argument);
}

TEST_CASE("patch gathers gradients in row-major pixel order") {
    GradientField g = compute_gradient(GrayImage(2, 2, {0.0, 1.0, 2.0, 4.0}));
    PatchGrid grid(2, 2, 2, 0);
    Distribution2D d = patch_distribution(g, grid, 0);
    REQUIRE(d.size() == 4);
    CHECK(d.points()[0].x == 0.5);
    CHECK(d.points()[0].y == 1.0);
    CHECK(d.points()[1].x == 0.5);
    CHECK(d.points()[1].y == 1.5);
    CHECK(d.points()[2].x == 1.0);
    CHECK(d.points()[2].y == 1.0);
    CHECK(d.points()[3].x == 1.0);
    CHECK(d.points()[3].y == 1.5);
}

TEST_CASE("interior gather keeps only the inner block") {
    GrayImage img = ramp_image(4, 4);
    GradientField g = compute_gradient(img);
    PatchGrid grid(4, 4, 4, 0);
    Distribution2D d = patch_distribution(g, grid, 0, PatchGather::interior);
    REQUIRE(d.size() == 4);
    // Inner pixels of the ramp all carry dx = 1, dy = 0.
    for (const Point2& p : d.points()) {
        CHECK(p.x == 1.0);
        CHECK(p.y == 0.0);
    }
}

TEST_CASE("patch gather validates its inputs") {
    GradientField g = compute_gradient(ramp_image(4, 4));
    PatchGrid grid(4, 4, 4, 0);
    PatchGrid other(6, 6, 4, 0);
    CHECK_THROWS_AS(patch_distribution(g, other, 0), std::invalid_argument);
    CHECK_THROWS_AS(patch_distribution(g, grid, 1), std::invalid_argument);
    GradientField g2 = compute_gradient(ramp_image(2, 2));
    PatchGrid tiny(2, 2, 2, 0);
    CHECK_THROWS_AS(patch_distribution(g2, tiny, 0, PatchGather::interior),
                    std::invalid_argument);
}

TEST_CASE("feature extraction records its configuration") {
    GrayImage img = ramp_image(8, 8);
    PatchGrid grid(8, 8, 4, 2);
    AngleGrid angles(6);
    FeatureSet fs = extract_features(img, grid, angles, true, PatchGather::interior);
    CHECK(fs.config.image_height == 8);
    CHECK(fs.config.image_width == 8);
    CHECK(fs.config.cell == 4);
    CHECK(fs.config.overlap == 2);
    CHECK(fs.config.angles == 6);
    CHECK(fs.config.log_transform);
    CHECK(fs.config.gather == PatchGather::interior);
    REQUIRE(fs.patches.size() == grid.patch_count());
    for (const RcdtRepresentation& r : fs.patches) {
        CHECK(r.rows() == 4);
        CHECK(r.cols() == 6);
    }
}

TEST_CASE("features of a constant image are identically zero") {
    FeatureSet fs = extract_features(GrayImage::filled(8, 8, 9.0), PatchGrid(8, 8, 4, 0),
                                     AngleGrid(4));
    for (const RcdtRepresentation& r : fs.patches)
        for (double v : r.data()) CHECK(v == 0.0);
}

TEST_CASE("feature extraction rejects a mismatched grid") {
    CHECK_THROWS_AS(extract_features(ramp_image(8, 8), PatchGrid(6, 6, 4, 0), AngleGrid(4)),
                    std::invalid_argument);
}

TEST_CASE("log transform changes the features of a non-constant image") {
    GrayImage img = ramp_image(8, 8);
    PatchGrid grid(8, 8, 4, 0);
    AngleGrid angles(4);
    FeatureSet plain = extract_features(img, grid, angles, false);
    FeatureSet logged = extract_features(img, grid, angles, true);
    CHECK(plain.patches[0].data() != logged.patches[0].data());
    CHECK_FALSE(plain.config == logged.config);
}

TEST_CASE("feature extraction is deterministic") {
    GrayImage img = ramp_image(9, 9);
    PatchGrid grid(9, 9, 4, 1);
    AngleGrid angles(8);
    FeatureSet a = extract_features(img, grid, angles);
    FeatureSet b = extract_features(img, grid, angles);
    REQUIRE(a.patches.size() == b.patches.size());
    for (std::size_t k = 0; k < a.patches.size(); ++k)
        CHECK(a.patches[k].data() == b.patches[k].data());
}

TEST_CASE("a constant brightness offset leaves integer-image features unchanged") {
    std::vector<double> px(64);
    for (std::size_t i = 0; i < 64; ++i) px[i] = static_cast<double>((i * 37) % 19);
    std::vector<double> lifted = px;
    for (double& p : lifted) p += 40.0;
    PatchGrid grid(8, 8, 4, 2);
    AngleGrid angles(8);
    FeatureSet a = extract_features(GrayImage(8, 8, px), grid, angles);
    FeatureSet b = extract_features(GrayImage(8, 8, lifted), grid, angles);
    for (std::size_t k = 0; k < a.patches.size(); ++k)
        CHECK(a.patches[k].data() == b.patches[k].data());
}

TEST_CASE("config differences are spelled out by field") {
    FeatureConfig a;
    FeatureConfig b = a;
    CHECK(a.describe_difference(b).empty());
    b.cell = 8;
    b.angles = 16;
    std::string diff = a.describe_difference(b);
    CHECK(diff.find("cell") != std::string::npos);
    CHECK(diff.find("angles") != std::string::npos);
    CHECK(diff.find("overlap") == std::string::npos);
}

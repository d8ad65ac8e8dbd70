#include <cmath>
#include <random>

#include <doctest.h>

#include "passprob/geometry.hpp"

using namespace passprob;
using geom::Point2;

namespace {

// Independent oracle: norm of p0 minus its orthogonal projection onto the
// line through p1 and p2.
double projection_residual(Point2 p0, Point2 p1, Point2 p2) {
    const double vx = p2.x - p1.x, vy = p2.y - p1.y;
    const double rx = p0.x - p1.x, ry = p0.y - p1.y;
    const double t = (rx * vx + ry * vy) / (vx * vx + vy * vy);
    const double px = p1.x + t * vx, py = p1.y + t * vy;
    return std::hypot(p0.x - px, p0.y - py);
}

Point2 rigid(Point2 p, double theta, double tx, double ty) {
    return {p.x * std::cos(theta) - p.y * std::sin(theta) + tx,
            p.x * std::sin(theta) + p.y * std::cos(theta) + ty};
}

}  // namespace

TEST_CASE("point_to_line_distance fixed examples") {
    CHECK(geom::point_to_line_distance({0, 1}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(geom::point_to_line_distance({0.5, 0.5}, {0, 0}, {1, 1}) == doctest::Approx(0.0));
    CHECK(geom::point_to_line_distance({1, 0}, {0, 0}, {1, 1}) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("point_to_line_distance degenerate line throws") {
    CHECK_THROWS_AS(geom::point_to_line_distance({1, 1}, {2, 3}, {2, 3}),
                    geom::DegenerateLineError);
}

TEST_CASE("point_to_line_distance matches projection-residual oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        Point2 p0{d(rng), d(rng)}, p1{d(rng), d(rng)}, p2{d(rng), d(rng)};
        if (std::hypot(p2.x - p1.x, p2.y - p1.y) < 1e-6) continue;
        CHECK(geom::point_to_line_distance(p0, p1, p2) ==
              doctest::Approx(projection_residual(p0, p1, p2)).epsilon(1e-9));
    }
}

TEST_CASE("point_to_line_distance invariants") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> d(-50.0, 50.0);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    for (int i = 0; i < 500; ++i) {
        Point2 p0{d(rng), d(rng)}, p1{d(rng), d(rng)}, p2{d(rng), d(rng)};
        if (std::hypot(p2.x - p1.x, p2.y - p1.y) < 1e-6) continue;
        const double base = geom::point_to_line_distance(p0, p1, p2);
        // endpoint order does not matter
        CHECK(geom::point_to_line_distance(p0, p2, p1) == doctest::Approx(base).epsilon(1e-12));
        // rigid motion invariance
        const double theta = ang(rng), tx = d(rng), ty = d(rng);
        CHECK(geom::point_to_line_distance(rigid(p0, theta, tx, ty), rigid(p1, theta, tx, ty),
                                           rigid(p2, theta, tx, ty)) ==
              doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("euclidean") {
    CHECK(geom::euclidean({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(geom::euclidean({2, 7}, {2, 7}) == doctest::Approx(0.0));
    CHECK(geom::euclidean({1, 2}, {4, 6}) == doctest::Approx(5.0));
}

TEST_CASE("euclidean triangle inequality on random triples") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        Point2 a{d(rng), d(rng)}, b{d(rng), d(rng)}, c{d(rng), d(rng)};
        CHECK(geom::euclidean(a, c) <= geom::euclidean(a, b) + geom::euclidean(b, c) + 1e-9);
    }
}

TEST_CASE("frame_delta") {
    CHECK(geom::frame_delta(3.0, 5.0) == doctest::Approx(-2.0));
    CHECK(geom::frame_delta(5.0, 5.0) == doctest::Approx(0.0));
    CHECK(geom::frame_delta(7.5, 4.25) == doctest::Approx(3.25));
}

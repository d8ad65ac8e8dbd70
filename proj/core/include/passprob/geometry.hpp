#pragma once

#include <cmath>

#include "passprob/errors.hpp"

namespace passprob::geom {

struct Point2 {
    double x{0.0};
    double y{0.0};
};

class DegenerateLineError : public NumericalError {
public:
    DegenerateLineError() : NumericalError("point_to_line_distance: p1 == p2 defines no line") {}
};

inline double euclidean(Point2 a, Point2 b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

// Change in a distance between consecutive frames; negative means approaching.
inline double frame_delta(double h_now, double h_prev) {
    return h_now - h_prev;
}

// Distance from p0 to the infinite line through p1 and p2.
inline double point_to_line_distance(Point2 p0, Point2 p1, Point2 p2) {
    const double dx = p2.x - p1.x;
    const double dy = p2.y - p1.y;
    const double len = std::hypot(dx, dy);
    if (len == 0.0) throw DegenerateLineError();
    const double num = std::fabs(dx * (p1.y - p0.y) - (p1.x - p0.x) * dy);
    return num / len;
}

}  // namespace passprob::geom

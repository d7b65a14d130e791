#pragma once

#include <cmath>

namespace fifcover {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Weighted L1 distance |dx| + theta*|dy|. Requires theta > 0.
inline double rho_distance(const Point& p, const Point& q, double theta) noexcept {
    return std::abs(p.x - q.x) + theta * std::abs(p.y - q.y);
}

inline double euclidean_distance(const Point& p, const Point& q) noexcept {
    return std::hypot(p.x - q.x, p.y - q.y);
}

// In the rotated frame (x + theta*y, x - theta*y) the rho metric becomes the
// Chebyshev metric, and every rho-ball becomes an axis-aligned square.
struct RotatedPoint {
    double p = 0.0;
    double q = 0.0;
};

inline RotatedPoint rotate(const Point& pt, double theta) noexcept {
    return {pt.x + theta * pt.y, pt.x - theta * pt.y};
}

} // namespace fifcover

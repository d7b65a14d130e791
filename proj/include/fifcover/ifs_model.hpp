#pragma once

#include "fifcover/error.hpp"
#include "fifcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace fifcover {

/// Interpolation nodes (x_0..x_n, y_0..y_n) and vertical scaling factors
/// d_1..d_n. Produced unchecked by parsers; pass through validate_data().
struct InterpolationData {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> ds;

    std::size_t map_count() const noexcept { return ds.size(); }
    double left() const { return xs.front(); }
    double right() const { return xs.back(); }
    Point first_point() const { return {xs.front(), ys.front()}; }
    Point last_point() const { return {xs.back(), ys.back()}; }

    friend bool operator==(const InterpolationData&, const InterpolationData&) = default;
};

/// (x, y) -> (a*x + b, c*x + d*y + e).
struct AffineMap {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double e = 0.0;

    friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

inline Point apply_map(const AffineMap& f, const Point& p) noexcept {
    return {f.a * p.x + f.b, f.c * p.x + f.d * p.y + f.e};
}

/// The n base maps (original labeling, index 0 is f_1) and the metric weight.
struct FifSystem {
    std::vector<AffineMap> maps;
    double theta = 1.0;
    InterpolationData data;

    std::size_t map_count() const noexcept { return maps.size(); }
    double width() const { return data.right() - data.left(); }
};

namespace detail {

inline void check_finite(const std::vector<double>& values, const char* field) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorCode::NonFiniteValue,
                        std::string(field) + "[" + std::to_string(i) + "] is not finite");
        }
    }
}

} // namespace detail

/// Returns the input unchanged when it describes a usable system; throws Error otherwise.
inline InterpolationData validate_data(InterpolationData raw) {
    detail::check_finite(raw.xs, "x");
    for (std::size_t k = 1; k < raw.xs.size(); ++k) {
        if (!(raw.xs[k - 1] < raw.xs[k])) {
            throw Error(ErrorCode::NonIncreasingAbscissas,
                        "x[" + std::to_string(k - 1) + "] >= x[" + std::to_string(k) + "]");
        }
    }
    if (raw.xs.size() < 3) {
        throw Error(ErrorCode::TooFewPoints,
                    "need at least 3 interpolation points (2 maps), got " +
                        std::to_string(raw.xs.size()));
    }
    if (raw.ys.size() != raw.xs.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "x has " + std::to_string(raw.xs.size()) + " entries but y has " +
                        std::to_string(raw.ys.size()));
    }
    if (raw.ds.size() + 1 != raw.xs.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "d must have " + std::to_string(raw.xs.size() - 1) + " entries, got " +
                        std::to_string(raw.ds.size()));
    }
    detail::check_finite(raw.ys, "y");
    detail::check_finite(raw.ds, "d");
    for (std::size_t k = 0; k < raw.ds.size(); ++k) {
        if (!(raw.ds[k] >= 0.0 && raw.ds[k] < 1.0)) {
            throw Error(ErrorCode::ScalingOutOfRange,
                        "d[" + std::to_string(k) + "] = " + std::to_string(raw.ds[k]) +
                            " is outside [0, 1)");
        }
    }
    return raw;
}

/// Builds the affine FIF system through the validated nodes.
///
/// Map k sends the whole interval [x_0, x_n] onto [x_{k-1}, x_k] and the
/// endpoints (x_0, y_0), (x_n, y_n) onto (x_{k-1}, y_{k-1}), (x_k, y_k).
/// theta is 1 when every shear c_k is exactly zero and
/// (1 - max a_k) / (2 max |c_k|) otherwise, which makes each map a
/// contraction for the weighted metric.
inline FifSystem build_system(const InterpolationData& data) {
    const InterpolationData& v = data;
    const std::size_t n = v.ds.size();
    const double x0 = v.xs.front();
    const double xn = v.xs[n];
    const double y0 = v.ys.front();
    const double yn = v.ys[n];
    const double width = xn - x0;

    FifSystem system;
    system.data = data;
    system.maps.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double dk = v.ds[k - 1];
        AffineMap f;
        f.a = (v.xs[k] - v.xs[k - 1]) / width;
        f.b = (xn * v.xs[k - 1] - x0 * v.xs[k]) / width;
        f.c = (v.ys[k] - v.ys[k - 1]) / width - dk * (yn - y0) / width;
        f.d = dk;
        f.e = (xn * v.ys[k - 1] - x0 * v.ys[k]) / width - dk * (xn * y0 - x0 * yn) / width;
        system.maps.push_back(f);
    }

    double max_a = 0.0;
    double max_abs_c = 0.0;
    for (const AffineMap& f : system.maps) {
        max_a = std::max(max_a, f.a);
        max_abs_c = std::max(max_abs_c, std::abs(f.c));
    }
    system.theta = max_abs_c == 0.0 ? 1.0 : (1.0 - max_a) / (2.0 * max_abs_c);
    return system;
}

} // namespace fifcover

#pragma once

#include "fifcover/analysis.hpp"
#include "fifcover/error.hpp"
#include "fifcover/geometry.hpp"
#include "fifcover/ifs_model.hpp"
#include "fifcover/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fifcover {

/// Theorem: radii exactly as the covering theorem prescribes (sorted
/// constants, rho-diameter). AppendixCompat: the published MATLAB listing's
/// variant, kept for cross-examining printed tables.
enum class CoveringMode { Theorem, AppendixCompat };

constexpr std::string_view to_string(CoveringMode mode) noexcept {
    return mode == CoveringMode::Theorem ? "theorem" : "appendix";
}

inline std::optional<CoveringMode> parse_mode(std::string_view text) noexcept {
    if (text == "theorem") return CoveringMode::Theorem;
    if (text == "appendix" || text == "appendix-compat") return CoveringMode::AppendixCompat;
    return std::nullopt;
}

/// Closed rho-ball {p : |p.x - u| + theta*|p.y - v| <= radius}.
struct Rhombus {
    Point center;
    double radius = 0.0;
    double theta = 1.0;
    std::uint64_t word_index = 0; // position in the lexicographic enumeration
    double lipschitz = 0.0;
};

struct RangeBounds {
    double lower = 0.0; // A
    double upper = 0.0; // B

    double width() const noexcept { return upper - lower; }
    double half_width() const noexcept { return 0.5 * (upper - lower); }
    double midpoint() const noexcept { return 0.5 * (upper + lower); }
};

/// [x_0, x_n] x [A, B], which contains the graph.
struct GraphBox {
    double left = 0.0;
    double right = 0.0;
    RangeBounds range;
};

struct Covering {
    std::size_t depth = 1;
    std::size_t map_count = 0; // n of the base system
    CoveringMode mode = CoveringMode::Theorem;
    double theta = 1.0;
    double big_m = 0.0; // diameter of the fixed-point set used for the radii
    std::vector<Rhombus> rhombi;
    std::vector<double> s_sorted;
    RangeBounds bounds;
    GraphBox box;
    /// Ways in which the radii depart from the covering theorem (appendix mode only).
    std::vector<std::string> deviations;

    Word word(std::size_t i) const { return word_at(rhombi[i].word_index, map_count, depth); }
};

/// Largest rho-distance between any two points, via the spread of x +/- theta*y.
inline double max_pairwise_distance(std::span<const Point> points, double theta) {
    if (points.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 points");
    double p_min = std::numeric_limits<double>::infinity();
    double p_max = -p_min;
    double q_min = p_min;
    double q_max = -p_min;
    for (const Point& pt : points) {
        const RotatedPoint r = rotate(pt, theta);
        p_min = std::min(p_min, r.p);
        p_max = std::max(p_max, r.p);
        q_min = std::min(q_min, r.q);
        q_max = std::max(q_max, r.q);
    }
    return std::max(p_max - p_min, q_max - q_min);
}

namespace detail {

inline double cross(const Point& o, const Point& a, const Point& b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; collinear points dropped.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& l, const Point& r) {
        return l.x < r.x || (l.x == r.x && l.y < r.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace detail

/// Largest Euclidean distance between any two points (hull vertices only).
inline double euclidean_diameter(std::span<const Point> points) {
    if (points.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 points");
    const std::vector<Point> hull = detail::convex_hull({points.begin(), points.end()});
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            best = std::max(best, euclidean_distance(hull[i], hull[j]));
        }
    }
    return best;
}

/// V1 (u+r, v), V2 (u-r, v), V3 (u, v+r/theta), V4 (u, v-r/theta).
inline std::array<Point, 4> rhombus_vertices(const Rhombus& r) noexcept {
    const Point& c = r.center;
    return {Point{c.x + r.radius, c.y}, Point{c.x - r.radius, c.y},
            Point{c.x, c.y + r.radius / r.theta}, Point{c.x, c.y - r.radius / r.theta}};
}

inline bool rhombus_contains(const Rhombus& r, const Point& p, double tol = 0.0) noexcept {
    return rho_distance(p, r.center, r.theta) <= r.radius + tol;
}

/// rho-distance from p to a single ball; zero inside.
inline double point_to_rhombus_distance(const Point& p, const Rhombus& r) noexcept {
    return std::max(0.0, rho_distance(p, r.center, r.theta) - r.radius);
}

inline double point_to_covering_distance(const Point& p, const Covering& c) {
    double best = std::numeric_limits<double>::infinity();
    for (const Rhombus& r : c.rhombi) {
        best = std::min(best, point_to_rhombus_distance(p, r));
        if (best == 0.0) break;
    }
    return best;
}

inline RangeBounds range_bounds(const Covering& c) {
    RangeBounds out{std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
    for (const Rhombus& r : c.rhombi) {
        out.lower = std::min(out.lower, r.center.y - r.radius / r.theta);
        out.upper = std::max(out.upper, r.center.y + r.radius / r.theta);
    }
    return out;
}

struct CoveringOptions {
    std::uint64_t map_cap = kDefaultMapCap;
    Parallelism parallelism;
};

/// Approximate peak bytes needed by build_covering for n maps at depth m.
inline std::uint64_t estimate_covering_bytes(std::size_t n, std::size_t m,
                                             std::uint64_t cap = kDefaultMapCap) {
    const std::uint64_t count = word_count(n, m, cap);
    const std::uint64_t per_map = sizeof(Rhombus) + 2 * sizeof(double) + sizeof(Point) +
                                  sizeof(AffineMap) + sizeof(AffineMap) / n;
    return count * per_map;
}

/// Rhombus covering of the graph built from the n^m maps of the depth-m system.
///
/// Every composed map contributes one rhombus centred at its fixed point.
/// In theorem mode, with s_N the largest and s_{N-1} the second largest
/// constant, map k gets M s_k (1 + s_N) / (1 - s_{N-1} s_N) except for one map
/// attaining s_N (the lexicographically last), which gets
/// M s_N (1 + s_{N-1}) / (1 - s_{N-1} s_N); M is the rho-diameter of the
/// fixed points. Appendix mode reproduces the published listing instead:
/// Euclidean diameter, factor (1 + s_k) and constants in enumeration order.
inline Covering build_covering(const FifSystem& system, std::size_t depth,
                               CoveringMode mode = CoveringMode::Theorem,
                               const CoveringOptions& options = {}) {
    const std::size_t n = system.map_count();
    const std::uint64_t count = word_count(n, depth, options.map_cap);
    const double theta = system.theta;

    Covering cover;
    cover.depth = depth;
    cover.map_count = n;
    cover.mode = mode;
    cover.theta = theta;
    cover.rhombi.resize(count);

    {
        const std::vector<AffineMap> maps =
            composed_maps(system, depth, options.map_cap, options.parallelism);
        parallel_for(count, options.parallelism, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                Rhombus& r = cover.rhombi[i];
                r.center = fixed_point(maps[i]);
                r.lipschitz = lipschitz_constant(maps[i], theta);
                r.theta = theta;
                r.word_index = i;
            }
        });
    }

    cover.s_sorted.resize(count);
    std::vector<Point> centers(count);
    for (std::size_t i = 0; i < count; ++i) {
        cover.s_sorted[i] = cover.rhombi[i].lipschitz;
        centers[i] = cover.rhombi[i].center;
    }
    std::sort(cover.s_sorted.begin(), cover.s_sorted.end());

    if (mode == CoveringMode::Theorem) {
        cover.big_m = max_pairwise_distance(centers, theta);
        const double s_top = cover.s_sorted[count - 1];
        const double s_next = cover.s_sorted[count - 2];
        const double denom = 1.0 - s_next * s_top;
        // Stable ascending order by (s, word) puts the last maximal word at the end.
        std::size_t top = 0;
        for (std::size_t i = 0; i < count; ++i) {
            if (cover.rhombi[i].lipschitz >= cover.rhombi[top].lipschitz) top = i;
        }
        const double big_m = cover.big_m;
        parallel_for(count, options.parallelism, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                Rhombus& r = cover.rhombi[i];
                r.radius = i == top ? big_m * s_top * (1.0 + s_next) / denom
                                    : big_m * r.lipschitz * (1.0 + s_top) / denom;
            }
        });
    } else {
        cover.big_m = euclidean_diameter(centers);
        const double s_last = cover.rhombi[count - 1].lipschitz;
        const double s_before = cover.rhombi[count - 2].lipschitz;
        const double denom = 1.0 - s_last * s_before;
        const double big_m = cover.big_m;
        parallel_for(count, options.parallelism, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                Rhombus& r = cover.rhombi[i];
                const double s = r.lipschitz;
                r.radius = i + 1 == count ? s * big_m * (1.0 + s_before) / denom
                                          : s * big_m * (1.0 + s) / denom;
            }
        });
        cover.deviations = {
            "diameter M measured with the Euclidean norm instead of the weighted metric",
            "non-final radii use the factor (1 + s_k) instead of (1 + s_max)",
            "Lipschitz constants taken in enumeration order instead of sorted ascending",
        };
    }

    cover.bounds = range_bounds(cover);
    cover.box = {system.data.left(), system.data.right(), cover.bounds};
    return cover;
}

/// Uniform grid over the covering in the rotated frame, where each rhombus
/// is an axis-aligned square. Answers "is p inside some rhombus (within tol)".
class CoveringIndex {
public:
    CoveringIndex(const Covering& cover, double tol) : cover_(&cover), tol_(tol) {
        const auto& rh = cover.rhombi;
        if (rh.empty()) return;
        p_lo_ = q_lo_ = std::numeric_limits<double>::infinity();
        double p_hi = -p_lo_;
        double q_hi = -p_lo_;
        for (const Rhombus& r : rh) {
            const RotatedPoint c = rotate(r.center, cover.theta);
            const double h = half_side(r);
            p_lo_ = std::min(p_lo_, c.p - h);
            q_lo_ = std::min(q_lo_, c.q - h);
            p_hi = std::max(p_hi, c.p + h);
            q_hi = std::max(q_hi, c.q + h);
        }
        const double side = std::ceil(std::sqrt(static_cast<double>(rh.size())));
        grid_ = static_cast<std::size_t>(std::clamp(2.0 * side, 1.0, 1024.0));
        cell_p_ = (p_hi - p_lo_) / static_cast<double>(grid_);
        cell_q_ = (q_hi - q_lo_) / static_cast<double>(grid_);
        if (!(cell_p_ > 0.0)) cell_p_ = 1.0;
        if (!(cell_q_ > 0.0)) cell_q_ = 1.0;

        std::vector<std::uint32_t> counts(grid_ * grid_ + 1, 0);
        auto for_cells = [&](const Rhombus& r, auto&& fn) {
            const RotatedPoint c = rotate(r.center, cover.theta);
            const double h = half_side(r);
            const std::size_t i0 = cell_of(c.p - h, p_lo_, cell_p_);
            const std::size_t i1 = cell_of(c.p + h, p_lo_, cell_p_);
            const std::size_t j0 = cell_of(c.q - h, q_lo_, cell_q_);
            const std::size_t j1 = cell_of(c.q + h, q_lo_, cell_q_);
            if ((i1 - i0 + 1) * (j1 - j0 + 1) > kMaxCellsPerEntry) return false;
            for (std::size_t i = i0; i <= i1; ++i)
                for (std::size_t j = j0; j <= j1; ++j) fn(i * grid_ + j);
            return true;
        };
        for (std::size_t k = 0; k < rh.size(); ++k) {
            if (!for_cells(rh[k], [&](std::size_t cell) { ++counts[cell + 1]; })) {
                large_.push_back(static_cast<std::uint32_t>(k));
            }
        }
        for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
        offsets_ = counts;
        entries_.resize(offsets_.back());
        std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t k = 0; k < rh.size(); ++k) {
            for_cells(rh[k], [&](std::size_t cell) {
                entries_[fill[cell]++] = static_cast<std::uint32_t>(k);
            });
        }
    }

    bool contains(const Point& pt) const {
        if (cover_->rhombi.empty()) return false;
        const auto& rh = cover_->rhombi;
        for (std::uint32_t k : large_) {
            if (rhombus_contains(rh[k], pt, tol_)) return true;
        }
        const RotatedPoint rp = rotate(pt, cover_->theta);
        const double slack = std::abs(tol_) + 1e-9 * (cell_p_ + cell_q_);
        if (rp.p < p_lo_ - slack || rp.q < q_lo_ - slack) return false;
        const std::size_t i = cell_of(rp.p, p_lo_, cell_p_);
        const std::size_t j = cell_of(rp.q, q_lo_, cell_q_);
        if (!near_grid(rp.p, p_lo_, cell_p_, slack) || !near_grid(rp.q, q_lo_, cell_q_, slack)) {
            return false;
        }
        const std::size_t cell = i * grid_ + j;
        for (std::uint32_t e = offsets_[cell]; e < offsets_[cell + 1]; ++e) {
            if (rhombus_contains(rh[entries_[e]], pt, tol_)) return true;
        }
        // The point may sit within tol of a cell border; fall back to a scan.
        if (slack > 0.0 && near_cell_border(rp, i, j, slack)) {
            for (const Rhombus& r : rh) {
                if (rhombus_contains(r, pt, tol_)) return true;
            }
        }
        return false;
    }

private:
    static constexpr std::size_t kMaxCellsPerEntry = 256;

    double half_side(const Rhombus& r) const noexcept { return r.radius + std::abs(tol_); }

    std::size_t cell_of(double v, double lo, double cell) const noexcept {
        const double t = std::floor((v - lo) / cell);
        if (!(t > 0.0)) return 0;
        return std::min(grid_ - 1, static_cast<std::size_t>(t));
    }

    bool near_grid(double v, double lo, double cell, double slack) const noexcept {
        return v <= lo + cell * static_cast<double>(grid_) + slack;
    }

    bool near_cell_border(const RotatedPoint& rp, std::size_t i, std::size_t j,
                          double slack) const noexcept {
        const double p0 = p_lo_ + cell_p_ * static_cast<double>(i);
        const double q0 = q_lo_ + cell_q_ * static_cast<double>(j);
        return rp.p - p0 < slack || p0 + cell_p_ - rp.p < slack || rp.q - q0 < slack ||
               q0 + cell_q_ - rp.q < slack;
    }

    const Covering* cover_;
    double tol_;
    std::size_t grid_ = 1;
    double p_lo_ = 0.0;
    double q_lo_ = 0.0;
    double cell_p_ = 1.0;
    double cell_q_ = 1.0;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> entries_;
    std::vector<std::uint32_t> large_;
};

} // namespace fifcover

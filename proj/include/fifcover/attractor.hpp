#pragma once

#include "fifcover/analysis.hpp"
#include "fifcover/covering.hpp"
#include "fifcover/geometry.hpp"
#include "fifcover/ifs_model.hpp"
#include "fifcover/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace fifcover {

enum class SampleMethod { ChaosGame, DeterministicDepth };

constexpr std::string_view to_string(SampleMethod m) noexcept {
    return m == SampleMethod::ChaosGame ? "chaos-game" : "deterministic-depth-m";
}

/// Finite approximation of the attractor (the graph of the interpolant).
struct AttractorSample {
    std::vector<Point> points;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
    SampleMethod method = SampleMethod::ChaosGame;
};

inline constexpr std::size_t kDefaultBurnIn = 100;

/// Random iteration starting at (x_0, y_0). Map k is drawn with probability
/// a_k from a std::mt19937_64 seeded with `seed`; the first burn_in iterates
/// are discarded.
inline AttractorSample chaos_game(const FifSystem& system, std::size_t n_points, std::uint64_t seed,
                                  std::size_t burn_in = kDefaultBurnIn) {
    std::vector<double> cumulative;
    cumulative.reserve(system.map_count());
    double total = 0.0;
    for (const AffineMap& f : system.maps) {
        total += f.a;
        cumulative.push_back(total);
    }
    std::mt19937_64 rng(seed);
    auto pick = [&] {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                     cumulative.size() - 1);
    };

    AttractorSample sample;
    sample.seed = seed;
    sample.burn_in = burn_in;
    sample.method = SampleMethod::ChaosGame;
    sample.points.reserve(n_points);
    Point p = system.data.first_point();
    for (std::size_t i = 0; i < burn_in; ++i) p = apply_map(system.maps[pick()], p);
    for (std::size_t i = 0; i < n_points; ++i) {
        p = apply_map(system.maps[pick()], p);
        sample.points.push_back(p);
    }
    return sample;
}

/// Images of an evenly discretized chord (x_0, y_0)-(x_n, y_n) under all
/// n^m composed maps, word-major. samples_per_segment == 1 uses the midpoint.
inline AttractorSample deterministic_iterate(const FifSystem& system, std::size_t depth,
                                             std::size_t samples_per_segment,
                                             std::uint64_t cap = kDefaultMapCap,
                                             Parallelism par = {}) {
    const std::vector<AffineMap> maps = composed_maps(system, depth, cap, par);
    const Point p0 = system.data.first_point();
    const Point p1 = system.data.last_point();
    std::vector<Point> chord(samples_per_segment);
    for (std::size_t j = 0; j < samples_per_segment; ++j) {
        const double t = samples_per_segment == 1
                             ? 0.5
                             : static_cast<double>(j) / static_cast<double>(samples_per_segment - 1);
        chord[j] = {p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
    }
    if (samples_per_segment > 1) {
        chord.front() = p0;
        chord.back() = p1;
    }

    AttractorSample sample;
    sample.method = SampleMethod::DeterministicDepth;
    sample.points.resize(maps.size() * samples_per_segment);
    parallel_for(maps.size(), par, [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            for (std::size_t j = 0; j < samples_per_segment; ++j) {
                sample.points[w * samples_per_segment + j] = apply_map(maps[w], chord[j]);
            }
        }
    });
    return sample;
}

struct ContainmentReport {
    std::size_t violations = 0;
    double max_excess = 0.0; // largest distance to the covering among violating points
};

/// Counts sample points farther than tol (rho) from every rhombus.
inline ContainmentReport verify_containment(const AttractorSample& sample, const Covering& cover,
                                            double tol, Parallelism par = {}) {
    ContainmentReport report;
    if (sample.points.empty() || cover.rhombi.empty()) {
        report.violations = cover.rhombi.empty() ? sample.points.size() : 0;
        report.max_excess = cover.rhombi.empty() && !sample.points.empty()
                                ? std::numeric_limits<double>::infinity()
                                : 0.0;
        return report;
    }
    const CoveringIndex index(cover, tol);
    const std::size_t workers = std::max<std::size_t>(1, par.resolved());
    std::vector<ContainmentReport> partial(workers);
    const std::size_t count = sample.points.size();
    const std::size_t chunk = (count + workers - 1) / workers;
    parallel_for(workers, par, [&](std::size_t wb, std::size_t we) {
        for (std::size_t w = wb; w < we; ++w) {
            ContainmentReport local;
            const std::size_t end = std::min(count, (w + 1) * chunk);
            for (std::size_t i = w * chunk; i < end; ++i) {
                const Point& p = sample.points[i];
                if (index.contains(p)) continue;
                const double dist = point_to_covering_distance(p, cover);
                if (dist > tol) {
                    ++local.violations;
                    local.max_excess = std::max(local.max_excess, dist);
                }
            }
            partial[w] = local;
        }
    });
    for (const ContainmentReport& r : partial) {
        report.violations += r.violations;
        report.max_excess = std::max(report.max_excess, r.max_excess);
    }
    return report;
}

/// Nearest-neighbour queries under rho over a fixed point set. In the
/// rotated frame rho is the Chebyshev metric, so a ring search over a
/// uniform grid is exact.
class SampleIndex {
public:
    SampleIndex(std::span<const Point> points, double theta) : theta_(theta) {
        pts_.reserve(points.size());
        for (const Point& p : points) pts_.push_back(rotate(p, theta));
        if (pts_.empty()) return;
        double p_hi = -std::numeric_limits<double>::infinity();
        double q_hi = p_hi;
        p_lo_ = q_lo_ = -p_hi;
        for (const RotatedPoint& r : pts_) {
            p_lo_ = std::min(p_lo_, r.p);
            q_lo_ = std::min(q_lo_, r.q);
            p_hi = std::max(p_hi, r.p);
            q_hi = std::max(q_hi, r.q);
        }
        const double extent = std::max(p_hi - p_lo_, q_hi - q_lo_);
        const double side = std::ceil(std::sqrt(static_cast<double>(pts_.size())));
        dim_ = static_cast<std::ptrdiff_t>(std::clamp(side, 1.0, 2048.0));
        cell_ = extent > 0.0 ? extent / static_cast<double>(dim_) : 1.0;
        dim_p_ = std::max<std::ptrdiff_t>(1, cell_index(p_hi, p_lo_) + 1);
        dim_q_ = std::max<std::ptrdiff_t>(1, cell_index(q_hi, q_lo_) + 1);

        std::vector<std::uint32_t> counts(static_cast<std::size_t>(dim_p_ * dim_q_) + 1, 0);
        for (const RotatedPoint& r : pts_) ++counts[flat(r) + 1];
        for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
        offsets_ = counts;
        order_.resize(pts_.size());
        std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t k = 0; k < pts_.size(); ++k) order_[fill[flat(pts_[k])]++] = static_cast<std::uint32_t>(k);
    }

    bool empty() const noexcept { return pts_.empty(); }

    /// rho-distance to the nearest indexed point (infinity when empty).
    double nearest_distance(const Point& query) const {
        double best = std::numeric_limits<double>::infinity();
        if (pts_.empty()) return best;
        const RotatedPoint q = rotate(query, theta_);
        const std::ptrdiff_t ci = cell_index(q.p, p_lo_);
        const std::ptrdiff_t cj = cell_index(q.q, q_lo_);
        // Chebyshev cell distance from the query cell to the grid.
        const std::ptrdiff_t gap_i = ci < 0 ? -ci : (ci >= dim_p_ ? ci - dim_p_ + 1 : 0);
        const std::ptrdiff_t gap_j = cj < 0 ? -cj : (cj >= dim_q_ ? cj - dim_q_ + 1 : 0);
        const std::ptrdiff_t max_ring =
            std::max({ci + 1, dim_p_ - ci, cj + 1, dim_q_ - cj, std::ptrdiff_t{1}});
        for (std::ptrdiff_t ring = std::max(gap_i, gap_j); ring <= max_ring; ++ring) {
            // Points in ring r+1 and beyond are at least r*cell away.
            if (best <= static_cast<double>(ring - 1) * cell_) break;
            scan_ring(ci, cj, ring, q, best);
        }
        return best;
    }

private:
    std::ptrdiff_t cell_index(double v, double lo) const noexcept {
        return static_cast<std::ptrdiff_t>(std::floor((v - lo) / cell_));
    }

    std::size_t flat(const RotatedPoint& r) const noexcept {
        const std::ptrdiff_t i = std::clamp<std::ptrdiff_t>(cell_index(r.p, p_lo_), 0, dim_p_ - 1);
        const std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(cell_index(r.q, q_lo_), 0, dim_q_ - 1);
        return static_cast<std::size_t>(i * dim_q_ + j);
    }

    void scan_cell(std::ptrdiff_t i, std::ptrdiff_t j, const RotatedPoint& q, double& best) const {
        if (i < 0 || j < 0 || i >= dim_p_ || j >= dim_q_) return;
        const std::size_t cell = static_cast<std::size_t>(i * dim_q_ + j);
        for (std::uint32_t e = offsets_[cell]; e < offsets_[cell + 1]; ++e) {
            const RotatedPoint& r = pts_[order_[e]];
            best = std::min(best, std::max(std::abs(r.p - q.p), std::abs(r.q - q.q)));
        }
    }

    void scan_ring(std::ptrdiff_t ci, std::ptrdiff_t cj, std::ptrdiff_t ring, const RotatedPoint& q,
                   double& best) const {
        if (ring == 0) {
            scan_cell(ci, cj, q, best);
            return;
        }
        const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(cj - ring, 0);
        const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(cj + ring, dim_q_ - 1);
        for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
            scan_cell(ci - ring, j, q, best);
            scan_cell(ci + ring, j, q, best);
        }
        const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(ci - ring + 1, 0);
        const std::ptrdiff_t i_hi = std::min<std::ptrdiff_t>(ci + ring - 1, dim_p_ - 1);
        for (std::ptrdiff_t i = i_lo; i <= i_hi; ++i) {
            scan_cell(i, cj - ring, q, best);
            scan_cell(i, cj + ring, q, best);
        }
    }

    double theta_;
    std::vector<RotatedPoint> pts_;
    double p_lo_ = 0.0;
    double q_lo_ = 0.0;
    double cell_ = 1.0;
    std::ptrdiff_t dim_ = 1;
    std::ptrdiff_t dim_p_ = 1;
    std::ptrdiff_t dim_q_ = 1;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> order_;
};

/// Boundary discretization used for the covering-to-sample direction:
/// centre, 4 vertices, and 64 perimeter points at half-step offsets.
inline constexpr std::size_t kRhombusBoundarySamples = 64;

inline std::vector<Point> rhombus_probe_points(const Rhombus& r) {
    const auto v = rhombus_vertices(r);
    // Perimeter walk V1 -> V3 -> V2 -> V4 -> V1.
    const std::array<Point, 5> loop = {v[0], v[2], v[1], v[3], v[0]};
    std::vector<Point> out;
    out.reserve(5 + kRhombusBoundarySamples);
    out.push_back(r.center);
    out.insert(out.end(), v.begin(), v.end());
    constexpr std::size_t per_edge = kRhombusBoundarySamples / 4;
    for (std::size_t edge = 0; edge < 4; ++edge) {
        for (std::size_t j = 0; j < per_edge; ++j) {
            const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(per_edge);
            const Point& a = loop[edge];
            const Point& b = loop[edge + 1];
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

struct HausdorffEstimate {
    double sample_to_covering = 0.0; // d1
    double covering_to_sample = 0.0; // d2
    double value() const noexcept { return std::max(sample_to_covering, covering_to_sample); }
};

/// Estimate of h(C_m, G_f) from a finite sample. d1 is exact for the given
/// sample; d2 is evaluated on rhombus_probe_points() only.
inline HausdorffEstimate hausdorff_estimate(const Covering& cover, const AttractorSample& sample,
                                            Parallelism par = {}) {
    HausdorffEstimate out;
    if (sample.points.empty() || cover.rhombi.empty()) return out;

    const CoveringIndex cover_index(cover, 0.0);
    for (const Point& p : sample.points) {
        if (cover_index.contains(p)) continue;
        out.sample_to_covering = std::max(out.sample_to_covering, point_to_covering_distance(p, cover));
    }

    const SampleIndex sample_index(sample.points, cover.theta);
    std::vector<double> worst(cover.rhombi.size(), 0.0);
    parallel_for(cover.rhombi.size(), par, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double w = 0.0;
            for (const Point& probe : rhombus_probe_points(cover.rhombi[i])) {
                w = std::max(w, sample_index.nearest_distance(probe));
            }
            worst[i] = w;
        }
    });
    for (double w : worst) out.covering_to_sample = std::max(out.covering_to_sample, w);
    return out;
}

} // namespace fifcover

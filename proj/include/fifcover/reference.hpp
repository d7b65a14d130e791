#pragma once

#include "fifcover/covering.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace fifcover {

/// Published (A_i, B_i) rows for depths 1..rows.size().
struct ReferenceTable {
    std::string name;
    std::string source;
    std::vector<RangeBounds> rows;
};

/// Computed bounds for one covering mode, index i holding depth i+1.
struct ModeBounds {
    CoveringMode mode = CoveringMode::Theorem;
    std::vector<RangeBounds> rows;
};

struct DeviationRow {
    std::size_t depth = 0;
    CoveringMode mode = CoveringMode::Theorem;
    RangeBounds computed;
    RangeBounds reference;
    double abs_lower = 0.0;      // A - A_ref
    double abs_upper = 0.0;      // B - B_ref
    double rel_lower = 0.0;      // (A - A_ref) / |A_ref|
    double rel_upper = 0.0;      // (B - B_ref) / |B_ref|
    double rel_half_width = 0.0; // (hw - hw_ref) / hw_ref
    double midpoint = 0.0;       // mid - mid_ref
};

struct DiscrepancyReport {
    std::string reference_name;
    std::string reference_source;
    std::vector<DeviationRow> rows;

    /// Largest |rel_half_width| at `depth` for `mode`; NaN when absent.
    double half_width_deviation(CoveringMode mode, std::size_t depth) const {
        for (const DeviationRow& r : rows) {
            if (r.mode == mode && r.depth == depth) return std::abs(r.rel_half_width);
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
};

namespace detail {

inline double relative(double value, double ref) noexcept {
    const double diff = value - ref;
    if (ref != 0.0) return diff / std::abs(ref);
    return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

} // namespace detail

/// Per-depth deviations of every mode from the reference table. Depths
/// missing from either side are skipped; nothing here asserts.
inline DiscrepancyReport compare_with_reference(const std::vector<ModeBounds>& computed,
                                                const ReferenceTable& reference) {
    DiscrepancyReport report{reference.name, reference.source, {}};
    for (const ModeBounds& mb : computed) {
        const std::size_t depths = std::min(mb.rows.size(), reference.rows.size());
        for (std::size_t i = 0; i < depths; ++i) {
            const RangeBounds& c = mb.rows[i];
            const RangeBounds& r = reference.rows[i];
            DeviationRow row;
            row.depth = i + 1;
            row.mode = mb.mode;
            row.computed = c;
            row.reference = r;
            row.abs_lower = c.lower - r.lower;
            row.abs_upper = c.upper - r.upper;
            row.rel_lower = detail::relative(c.lower, r.lower);
            row.rel_upper = detail::relative(c.upper, r.upper);
            row.rel_half_width = detail::relative(c.half_width(), r.half_width());
            row.midpoint = c.midpoint() - r.midpoint();
            report.rows.push_back(row);
        }
    }
    return report;
}

} // namespace fifcover

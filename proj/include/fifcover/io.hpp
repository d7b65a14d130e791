#pragma once

#include "fifcover/attractor.hpp"
#include "fifcover/covering.hpp"
#include "fifcover/error.hpp"
#include "fifcover/ifs_model.hpp"
#include "fifcover/reference.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace fifcover {

inline constexpr int kFormatVersion = 1;

struct InputDocument {
    InterpolationData data;
    std::optional<std::string> name;
};

/// Shortest-free, locale-independent rendering with 17 significant digits.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

namespace detail {

inline std::string location_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument,
                    "invalid JSON at " + location_of(text, e.byte == 0 ? 0 : e.byte - 1));
    }
}

inline void check_version(const nlohmann::json& doc) {
    if (!doc.contains("format_version")) return;
    const auto& v = doc["format_version"];
    if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
        throw Error(ErrorCode::MalformedDocument,
                    "unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
    }
}

inline double number_field(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw Error(ErrorCode::MalformedDocument, where + "." + key + " must be a number");
    }
    return obj[key].get<double>();
}

inline std::vector<double> number_array(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw Error(ErrorCode::MalformedDocument, std::string("missing field \"") + key + "\"");
    }
    const auto& arr = doc[key];
    if (!arr.is_array()) {
        throw Error(ErrorCode::MalformedDocument, std::string("field \"") + key + "\" must be an array");
    }
    std::vector<double> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            throw Error(ErrorCode::MalformedDocument,
                        std::string(key) + "[" + std::to_string(i) + "] is not a number");
        }
        out.push_back(arr[i].get<double>());
    }
    return out;
}

inline void append_array(std::string& out, const std::vector<double>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(values[i]);
    }
    out += ']';
}

inline void append_point(std::string& out, const Point& p) {
    out += '[';
    out += format_double(p.x);
    out += ", ";
    out += format_double(p.y);
    out += ']';
}

} // namespace detail

/// Parses {"x": [...], "y": [...], "d": [...], "name"?: "..."} and validates it.
inline InputDocument parse_input(std::string_view text) {
    const nlohmann::json doc = detail::parse_json(text);
    if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "top level must be an object");
    detail::check_version(doc);
    InputDocument out;
    out.data.xs = detail::number_array(doc, "x");
    out.data.ys = detail::number_array(doc, "y");
    out.data.ds = detail::number_array(doc, "d");
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw Error(ErrorCode::MalformedDocument, "name must be a string");
        out.name = doc["name"].get<std::string>();
    }
    out.data = validate_data(std::move(out.data));
    return out;
}

inline std::string emit_input(const InputDocument& doc) {
    std::string out = "{\n  \"format_version\": 1,\n";
    if (doc.name) out += "  \"name\": " + nlohmann::json(*doc.name).dump() + ",\n";
    out += "  \"x\": ";
    detail::append_array(out, doc.data.xs);
    out += ",\n  \"y\": ";
    detail::append_array(out, doc.data.ys);
    out += ",\n  \"d\": ";
    detail::append_array(out, doc.data.ds);
    out += "\n}\n";
    return out;
}

/// Covering document: one rhombus object per line, numbers with 17 significant digits.
inline std::string covering_to_json(const Covering& c) {
    std::string out;
    out.reserve(256 + c.rhombi.size() * (160 + 4 * c.depth));
    out += "{\n  \"format_version\": 1,\n";
    out += "  \"mode\": \"" + std::string(to_string(c.mode)) + "\",\n";
    out += "  \"depth\": " + std::to_string(c.depth) + ",\n";
    out += "  \"map_count\": " + std::to_string(c.map_count) + ",\n";
    out += "  \"theta\": " + format_double(c.theta) + ",\n";
    out += "  \"big_m\": " + format_double(c.big_m) + ",\n";
    out += "  \"bounds\": {\"A\": " + format_double(c.bounds.lower) +
           ", \"B\": " + format_double(c.bounds.upper) + "},\n";
    out += "  \"box\": {\"x_min\": " + format_double(c.box.left) +
           ", \"x_max\": " + format_double(c.box.right) + ", \"A\": " +
           format_double(c.box.range.lower) + ", \"B\": " + format_double(c.box.range.upper) +
           "},\n";
    out += "  \"deviations\": [";
    for (std::size_t i = 0; i < c.deviations.size(); ++i) {
        if (i) out += ", ";
        out += nlohmann::json(c.deviations[i]).dump();
    }
    out += "],\n  \"rhombi\": [";
    for (std::size_t i = 0; i < c.rhombi.size(); ++i) {
        const Rhombus& r = c.rhombi[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"word\": [";
        const Word w = c.word(i);
        for (std::size_t j = 0; j < w.letters.size(); ++j) {
            if (j) out += ", ";
            out += std::to_string(w.letters[j]);
        }
        out += "], \"center\": ";
        detail::append_point(out, r.center);
        out += ", \"radius\": " + format_double(r.radius);
        out += ", \"lipschitz\": " + format_double(r.lipschitz);
        out += ", \"vertices\": [";
        const auto v = rhombus_vertices(r);
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j) out += ", ";
            detail::append_point(out, v[j]);
        }
        out += "]}";
    }
    out += c.rhombi.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

/// Inverse of covering_to_json. Word order must be lexicographic.
inline Covering parse_covering(std::string_view text) {
    const nlohmann::json doc = detail::parse_json(text);
    if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "top level must be an object");
    detail::check_version(doc);
    Covering c;
    const auto mode = doc.contains("mode") && doc["mode"].is_string()
                          ? parse_mode(doc["mode"].get<std::string>())
                          : std::nullopt;
    if (!mode) throw Error(ErrorCode::MalformedDocument, "mode must be \"theorem\" or \"appendix\"");
    c.mode = *mode;
    if (!doc.contains("depth") || !doc["depth"].is_number_unsigned() ||
        !doc.contains("map_count") || !doc["map_count"].is_number_unsigned()) {
        throw Error(ErrorCode::MalformedDocument, "depth and map_count must be positive integers");
    }
    c.depth = doc["depth"].get<std::size_t>();
    c.map_count = doc["map_count"].get<std::size_t>();
    if (c.depth < 1 || c.map_count < 2) {
        throw Error(ErrorCode::MalformedDocument, "depth must be >= 1 and map_count >= 2");
    }
    c.theta = detail::number_field(doc, "theta", "covering");
    c.big_m = detail::number_field(doc, "big_m", "covering");
    if (!doc.contains("bounds")) throw Error(ErrorCode::MalformedDocument, "missing bounds");
    c.bounds.lower = detail::number_field(doc["bounds"], "A", "bounds");
    c.bounds.upper = detail::number_field(doc["bounds"], "B", "bounds");
    if (doc.contains("box")) {
        const auto& box = doc["box"];
        c.box.left = detail::number_field(box, "x_min", "box");
        c.box.right = detail::number_field(box, "x_max", "box");
        c.box.range = {detail::number_field(box, "A", "box"), detail::number_field(box, "B", "box")};
    }
    if (doc.contains("deviations") && doc["deviations"].is_array()) {
        for (const auto& d : doc["deviations"]) {
            if (d.is_string()) c.deviations.push_back(d.get<std::string>());
        }
    }
    if (!doc.contains("rhombi") || !doc["rhombi"].is_array()) {
        throw Error(ErrorCode::MalformedDocument, "rhombi must be an array");
    }
    const auto& arr = doc["rhombi"];
    c.rhombi.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "rhombi[" + std::to_string(i) + "]";
        const auto& item = arr[i];
        if (!item.is_object() || !item.contains("center") || !item["center"].is_array() ||
            item["center"].size() != 2 || !item["center"][0].is_number() ||
            !item["center"][1].is_number()) {
            throw Error(ErrorCode::MalformedDocument, where + ".center must be [u, v]");
        }
        Rhombus r;
        r.center = {item["center"][0].get<double>(), item["center"][1].get<double>()};
        r.radius = detail::number_field(item, "radius", where);
        r.lipschitz = detail::number_field(item, "lipschitz", where);
        r.theta = c.theta;
        std::uint64_t index = 0;
        if (!item.contains("word") || !item["word"].is_array() || item["word"].size() != c.depth) {
            throw Error(ErrorCode::MalformedDocument, where + ".word must have depth letters");
        }
        for (const auto& letter : item["word"]) {
            if (!letter.is_number_unsigned()) {
                throw Error(ErrorCode::MalformedDocument, where + ".word letters must be integers");
            }
            const auto k = letter.get<std::uint64_t>();
            if (k < 1 || k > c.map_count) {
                throw Error(ErrorCode::LetterOutOfRange, where + ".word letter out of range");
            }
            index = index * c.map_count + (k - 1);
        }
        r.word_index = index;
        c.rhombi.push_back(r);
    }
    c.s_sorted.reserve(c.rhombi.size());
    for (const Rhombus& r : c.rhombi) c.s_sorted.push_back(r.lipschitz);
    std::sort(c.s_sorted.begin(), c.s_sorted.end());
    return c;
}

/// CSV with header "x,y" and one point per line.
inline std::string sample_to_csv(const AttractorSample& sample) {
    std::string out = "x,y\n";
    out.reserve(out.size() + sample.points.size() * 48);
    for (const Point& p : sample.points) {
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += '\n';
    }
    return out;
}

inline std::vector<Point> parse_points_csv(std::string_view text) {
    std::vector<Point> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto parse_num = [&](std::string_view field, double& v) {
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        return res.ec == std::errc{} && res.ptr == field.data() + field.size();
    };
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "x,y") throw Error(ErrorCode::MalformedDocument, "CSV header must be x,y");
            continue;
        }
        const std::size_t comma = line.find(',');
        Point p;
        if (comma == std::string_view::npos || !parse_num(line.substr(0, comma), p.x) ||
            !parse_num(line.substr(comma + 1), p.y)) {
            throw Error(ErrorCode::MalformedDocument, "bad CSV row at line " + std::to_string(line_no));
        }
        out.push_back(p);
    }
    return out;
}

/// {"format_version": 1, "name", "source", "rows": [{"depth", "A", "B"}, ...]}
inline ReferenceTable parse_reference(std::string_view text) {
    const nlohmann::json doc = detail::parse_json(text);
    if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "top level must be an object");
    detail::check_version(doc);
    ReferenceTable table;
    if (doc.contains("name") && doc["name"].is_string()) table.name = doc["name"].get<std::string>();
    if (doc.contains("source") && doc["source"].is_string()) {
        table.source = doc["source"].get<std::string>();
    }
    if (!doc.contains("rows") || !doc["rows"].is_array()) {
        throw Error(ErrorCode::MalformedDocument, "rows must be an array");
    }
    const auto& rows = doc["rows"];
    table.rows.resize(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string where = "rows[" + std::to_string(i) + "]";
        const auto& row = rows[i];
        if (!row.is_object() || !row.contains("depth") || !row["depth"].is_number_unsigned()) {
            throw Error(ErrorCode::MalformedDocument, where + ".depth must be a positive integer");
        }
        const auto depth = row["depth"].get<std::size_t>();
        if (depth < 1 || depth > rows.size() || seen[depth - 1]) {
            throw Error(ErrorCode::MalformedDocument, where + ".depth must enumerate 1..rows");
        }
        seen[depth - 1] = true;
        table.rows[depth - 1] = {detail::number_field(row, "A", where),
                                 detail::number_field(row, "B", where)};
    }
    return table;
}

inline std::string report_to_json(const DiscrepancyReport& report) {
    nlohmann::ordered_json doc;
    doc["format_version"] = kFormatVersion;
    doc["reference"] = {{"name", report.reference_name}, {"source", report.reference_source}};
    doc["rows"] = nlohmann::ordered_json::array();
    for (const DeviationRow& r : report.rows) {
        doc["rows"].push_back({{"depth", r.depth},
                               {"mode", std::string(to_string(r.mode))},
                               {"A", r.computed.lower},
                               {"B", r.computed.upper},
                               {"A_ref", r.reference.lower},
                               {"B_ref", r.reference.upper},
                               {"abs_dA", r.abs_lower},
                               {"abs_dB", r.abs_upper},
                               {"rel_dA", r.rel_lower},
                               {"rel_dB", r.rel_upper},
                               {"rel_half_width", r.rel_half_width},
                               {"midpoint_dev", r.midpoint}});
    }
    return doc.dump(2) + "\n";
}

struct SvgOptions {
    double width_px = 800.0;
    double height_px = 600.0;
};

/// Standalone SVG of a covering, the interpolation nodes, and optionally an
/// attractor sample. Larger ordinates render upward.
inline std::string emit_svg(const Covering& cover, const InterpolationData& data,
                            const AttractorSample* sample = nullptr, SvgOptions opts = {}) {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    auto extend = [&](const Point& p) {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    };
    for (const Rhombus& r : cover.rhombi) {
        for (const Point& v : rhombus_vertices(r)) extend(v);
    }
    if (cover.rhombi.empty()) {
        for (std::size_t k = 0; k < data.xs.size(); ++k) extend({data.xs[k], data.ys[k]});
    }
    if (!(x_hi > x_lo)) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (!(y_hi > y_lo)) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double pad_x = 0.05 * (x_hi - x_lo);
    const double pad_y = 0.05 * (y_hi - y_lo);
    x_lo -= pad_x;
    x_hi += pad_x;
    y_lo -= pad_y;
    y_hi += pad_y;

    auto fmt = [](double v) { return format_double(v); };
    auto coord = [&](const Point& p) { return fmt(p.x) + "," + fmt(-p.y); };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(opts.width_px)
        << "\" height=\"" << fmt(opts.height_px) << "\" viewBox=\"" << fmt(x_lo) << ' '
        << fmt(-y_hi) << ' ' << fmt(x_hi - x_lo) << ' ' << fmt(y_hi - y_lo)
        << "\" preserveAspectRatio=\"none\">\n";
    svg << "<!-- format_version 1; depth " << cover.depth << "; mode " << to_string(cover.mode)
        << "; A " << fmt(cover.bounds.lower) << "; B " << fmt(cover.bounds.upper) << " -->\n";
    svg << "<g fill=\"#3b6fb6\" fill-opacity=\"0.25\" stroke=\"#1d3d6b\" stroke-width=\"1\" "
           "vector-effect=\"non-scaling-stroke\">\n";
    for (const Rhombus& r : cover.rhombi) {
        const auto v = rhombus_vertices(r);
        svg << "<polygon vector-effect=\"non-scaling-stroke\" points=\"" << coord(v[0]) << ' '
            << coord(v[2]) << ' ' << coord(v[1]) << ' ' << coord(v[3]) << "\"/>\n";
    }
    svg << "</g>\n";
    if (sample && !sample->points.empty()) {
        svg << "<path fill=\"none\" stroke=\"#000000\" stroke-width=\"0.8\" "
               "stroke-linecap=\"round\" vector-effect=\"non-scaling-stroke\" d=\"";
        for (const Point& p : sample->points) svg << 'M' << coord(p) << "h0";
        svg << "\"/>\n";
    }
    svg << "<g stroke=\"#c0392b\" stroke-width=\"7\" stroke-linecap=\"round\" "
           "vector-effect=\"non-scaling-stroke\">\n";
    for (std::size_t k = 0; k < data.xs.size(); ++k) {
        svg << "<path vector-effect=\"non-scaling-stroke\" d=\"M" << coord({data.xs[k], data.ys[k]})
            << "h0\"/>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace fifcover

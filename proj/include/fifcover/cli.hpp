#pragma once

#include "fifcover/attractor.hpp"
#include "fifcover/covering.hpp"
#include "fifcover/error.hpp"
#include "fifcover/ifs_model.hpp"
#include "fifcover/io.hpp"
#include "fifcover/reference.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fifcover::cli {

/// Process exit codes; also listed in `--help`.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParseError = 2,
    kValidationError = 3,
    kDepthCapExceeded = 4,
    kContainmentViolation = 5,
    kIoError = 6,
};

inline constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success; 1 bad command line; 2 malformed input document; "
    "3 invalid interpolation data; 4 n^m above the map cap; "
    "5 containment violations (check); 6 file I/O failure.";

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

inline int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedDocument: return kParseError;
    case ErrorCode::DepthCapExceeded: return kDepthCapExceeded;
    default: return kValidationError;
    }
}

namespace detail {

inline std::string fixed(double v, int digits = 4) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

inline std::string covering_csv(const Covering& c) {
    std::string out = "word,u,v,radius,lipschitz\n";
    for (std::size_t i = 0; i < c.rhombi.size(); ++i) {
        const Rhombus& r = c.rhombi[i];
        std::string w = c.word(i).to_string();
        std::replace(w.begin(), w.end(), ',', ' ');
        out += w + ',' + format_double(r.center.x) + ',' + format_double(r.center.y) + ',' +
               format_double(r.radius) + ',' + format_double(r.lipschitz) + '\n';
    }
    return out;
}

struct CommonArgs {
    std::string input;
    std::string mode = "theorem";
    std::uint64_t map_cap = kDefaultMapCap;
    unsigned workers = 1;
};

inline CoveringMode mode_of(const std::string& text) {
    // CLI11 already restricted the value.
    return parse_mode(text).value_or(CoveringMode::Theorem);
}

} // namespace detail

/// Runs the command line `args` (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rhombus coverings and range bounds for affine fractal interpolation functions",
                 args.empty() ? "fifcover" : args.front()};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);

    detail::CommonArgs common;
    auto add_common = [&](CLI::App* sub, bool with_mode) {
        sub->add_option("--input", common.input, "Input JSON {x, y, d, name?}")
            ->required();
        if (with_mode) {
            sub->add_option("--mode", common.mode, "Radius formulas: theorem or appendix")
                ->check(CLI::IsMember({"theorem", "appendix"}));
        }
        sub->add_option("--max-maps", common.map_cap, "Cap on the number of composed maps n^m")
            ->capture_default_str();
        sub->add_option("--workers", common.workers, "Worker threads (0 = all cores)")
            ->capture_default_str();
    };

    std::size_t depth = 1;
    std::string json_path, svg_path, csv_path, reference_path, report_path, out_path;
    std::size_t points = 100000;
    std::uint64_t seed = 42;
    std::size_t burn_in = kDefaultBurnIn;
    double tol_rel = 1e-9;

    auto* cover = app.add_subcommand("cover", "Build the covering C_m and write it out");
    add_common(cover, true);
    cover->add_option("--depth", depth, "Depth m")->required()->check(CLI::PositiveNumber);
    cover->add_option("--json", json_path, "Covering JSON output");
    cover->add_option("--svg", svg_path, "SVG output");
    cover->add_option("--csv", csv_path, "Per-rhombus CSV output");

    auto* range = app.add_subcommand("range", "Print range bounds [A_m, B_m] for m = 1..M");
    add_common(range, true);
    range->add_option("--max-depth", depth, "Largest depth M")->required()->check(CLI::PositiveNumber);
    range->add_option("--reference", reference_path, "Reference table JSON; adds deviation columns");
    range->add_option("--report", report_path, "Write the discrepancy report as JSON");

    auto* sample = app.add_subcommand("sample", "Chaos-game sample of the graph as CSV");
    add_common(sample, false);
    sample->add_option("--points", points, "Number of points")->required();
    sample->add_option("--seed", seed, "PRNG seed")->required();
    sample->add_option("--burn-in", burn_in, "Discarded initial iterates")->capture_default_str();
    sample->add_option("--out", out_path, "CSV output")->required();

    auto* check = app.add_subcommand("check", "Verify that a chaos-game sample lies in C_m");
    add_common(check, true);
    check->add_option("--depth", depth, "Depth m")->required()->check(CLI::PositiveNumber);
    check->add_option("--points", points, "Number of points")->required();
    check->add_option("--seed", seed, "PRNG seed")->required();
    check->add_option("--burn-in", burn_in, "Discarded initial iterates")->capture_default_str();
    check->add_option("--tol", tol_rel, "Tolerance relative to x_n - x_0")->capture_default_str();

    auto* render = app.add_subcommand("render", "SVG of C_m with an optional attractor overlay");
    add_common(render, true);
    render->add_option("--depth", depth, "Depth m")->required()->check(CLI::PositiveNumber);
    render->add_option("--svg", svg_path, "SVG output")->required();
    auto* render_points = render->add_option("--points", points, "Overlay sample size");
    render->add_option("--seed", seed, "PRNG seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        const InputDocument doc = parse_input(read_file(common.input));
        const FifSystem system = build_system(doc.data);
        const CoveringMode mode = detail::mode_of(common.mode);
        CoveringOptions options;
        options.map_cap = common.map_cap;
        options.parallelism.workers = common.workers;
        auto report_memory = [&](std::size_t m) {
            const auto bytes = estimate_covering_bytes(system.map_count(), m, options.map_cap);
            err << "building " << word_count(system.map_count(), m, options.map_cap)
                << " rhombi (about " << (bytes >> 20) << " MiB)\n";
        };

        if (app.got_subcommand(cover)) {
            report_memory(depth);
            const Covering c = build_covering(system, depth, mode, options);
            out << "mode " << to_string(c.mode) << "\ndepth " << c.depth << "\nrhombi "
                << c.rhombi.size() << "\ntheta " << format_double(c.theta) << "\nM "
                << format_double(c.big_m) << "\nA " << format_double(c.bounds.lower) << "\nB "
                << format_double(c.bounds.upper) << '\n';
            if (!json_path.empty()) write_file(json_path, covering_to_json(c));
            if (!svg_path.empty()) write_file(svg_path, emit_svg(c, system.data));
            if (!csv_path.empty()) write_file(csv_path, detail::covering_csv(c));
            return kOk;
        }

        if (app.got_subcommand(range)) {
            std::vector<ModeBounds> computed;
            std::vector<CoveringMode> modes{mode};
            if (!reference_path.empty()) {
                modes = {CoveringMode::Theorem, CoveringMode::AppendixCompat};
            }
            word_count(system.map_count(), depth, options.map_cap);
            for (CoveringMode md : modes) {
                ModeBounds mb{md, {}};
                for (std::size_t m = 1; m <= depth; ++m) {
                    mb.rows.push_back(build_covering(system, m, md, options).bounds);
                }
                computed.push_back(std::move(mb));
            }
            if (reference_path.empty()) {
                out << "m\tA_m\tB_m\n";
                for (std::size_t i = 0; i < computed.front().rows.size(); ++i) {
                    const RangeBounds& b = computed.front().rows[i];
                    out << i + 1 << '\t' << detail::fixed(b.lower) << '\t' << detail::fixed(b.upper)
                        << '\n';
                }
                return kOk;
            }
            const ReferenceTable table = parse_reference(read_file(reference_path));
            const DiscrepancyReport report = compare_with_reference(computed, table);
            out << "reference: " << table.name << " (" << table.source << ")\n";
            out << "m\tmode\tA_m\tB_m\tA_ref\tB_ref\tdA\tdB\trel_dA\trel_dB\trel_halfwidth\tdmid\n";
            for (const DeviationRow& r : report.rows) {
                out << r.depth << '\t' << to_string(r.mode) << '\t' << detail::fixed(r.computed.lower)
                    << '\t' << detail::fixed(r.computed.upper) << '\t'
                    << detail::fixed(r.reference.lower) << '\t' << detail::fixed(r.reference.upper)
                    << '\t' << detail::fixed(r.abs_lower) << '\t' << detail::fixed(r.abs_upper)
                    << '\t' << detail::fixed(r.rel_lower) << '\t' << detail::fixed(r.rel_upper)
                    << '\t' << detail::fixed(r.rel_half_width) << '\t' << detail::fixed(r.midpoint)
                    << '\n';
            }
            if (!report_path.empty()) write_file(report_path, report_to_json(report));
            return kOk;
        }

        if (app.got_subcommand(sample)) {
            const AttractorSample s = chaos_game(system, points, seed, burn_in);
            write_file(out_path, sample_to_csv(s));
            out << "wrote " << s.points.size() << " points to " << out_path << '\n';
            return kOk;
        }

        if (app.got_subcommand(check)) {
            report_memory(depth);
            const Covering c = build_covering(system, depth, mode, options);
            const AttractorSample s = chaos_game(system, points, seed, burn_in);
            const double tol = tol_rel * system.width();
            const ContainmentReport rep = verify_containment(s, c, tol, options.parallelism);
            out << rep.violations << " violations (" << s.points.size() << " points, "
                << c.rhombi.size() << " rhombi, tol " << format_double(tol) << ", max excess "
                << format_double(rep.max_excess) << ")\n";
            return rep.violations == 0 ? kOk : kContainmentViolation;
        }

        if (app.got_subcommand(render)) {
            report_memory(depth);
            const Covering c = build_covering(system, depth, mode, options);
            if (render_points->count() > 0) {
                const AttractorSample s = chaos_game(system, points, seed, burn_in);
                write_file(svg_path, emit_svg(c, system.data, &s));
            } else {
                write_file(svg_path, emit_svg(c, system.data));
            }
            out << "wrote " << svg_path << '\n';
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kUsage;
}

} // namespace fifcover::cli

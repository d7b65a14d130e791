#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fifcover;
using namespace fifcover::testing;

namespace {

ErrorCode parse_error_code(std::string_view text) {
    try {
        parse_input(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected parse failure";
    return ErrorCode::DegenerateMap;
}

} // namespace

TEST(ParseInput, Frameworks) {
    const InputDocument f1 = parse_input(R"({"x":[0,1,2,3,4],"y":[3,2,4,3,4],"d":[0.3,0.3,0.3,0.3]})");
    EXPECT_EQ(f1.data, framework1());
    EXPECT_FALSE(f1.name.has_value());
    const InputDocument f3 =
        parse_input(R"({"x":[0,30,60,100],"y":[0,50,40,-10],"d":[0.5,0.5,0.23],"name":"f3"})");
    EXPECT_EQ(f3.data, framework3());
    EXPECT_EQ(f3.name, "f3");
    EXPECT_EQ(parse_input(slurp(data_path("framework2.json"))).data, framework2());
}

TEST(ParseInput, Errors) {
    EXPECT_EQ(parse_error_code(R"({"x":[0,100],"y":[0,0],"d":[0.5]})"), ErrorCode::TooFewPoints);
    EXPECT_EQ(parse_error_code(R"({"x":[0,1,2],"y":[0,0,0]})"), ErrorCode::MalformedDocument);
    EXPECT_EQ(parse_error_code(R"({"x":[0,1,"2"],"y":[0,0,0],"d":[0,0]})"), ErrorCode::MalformedDocument);
    EXPECT_EQ(parse_error_code(R"([1,2,3])"), ErrorCode::MalformedDocument);
    EXPECT_EQ(parse_error_code(R"({"format_version":2,"x":[0,1,2],"y":[0,0,0],"d":[0,0]})"),
              ErrorCode::MalformedDocument);
    EXPECT_EQ(parse_error_code(R"({"x":[0,1,2],"y":[0,0,0],"d":[0,1.5]})"), ErrorCode::ScalingOutOfRange);
}

TEST(ParseInput, MalformedJsonReportsLocation) {
    try {
        parse_input("{\n  \"x\": [0, 1,\n  oops\n}");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedDocument);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(ParseInput, ValidationErrorsNameTheField) {
    try {
        parse_input(R"({"x":[0,1,2],"y":[0,0,0],"d":[0.1,1.5]})");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("d[1]"), std::string::npos) << e.what();
    }
}

TEST(InputDocument, RoundTripsExactly) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    std::uniform_real_distribution<double> gap(1e-9, 1e3);
    std::uniform_real_distribution<double> scale(0.0, 0.999999);
    for (int trial = 0; trial < 200; ++trial) {
        InputDocument doc;
        double x = val(rng);
        for (int k = 0; k < 6; ++k) {
            doc.data.xs.push_back(x);
            doc.data.ys.push_back(val(rng) / 3.0);
            x += gap(rng);
        }
        for (int k = 0; k < 5; ++k) doc.data.ds.push_back(scale(rng));
        if (trial % 2) doc.name = "trial \"" + std::to_string(trial) + "\"";
        const InputDocument back = parse_input(emit_input(doc));
        EXPECT_EQ(back.data, doc.data);
        EXPECT_EQ(back.name, doc.name);
    }
}

TEST(FormatDouble, SeventeenDigitsLocaleFree) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(format_double(-1.5e-300), "-1.5000000000000001e-300");
}

TEST(CoveringDocument, RoundTripPreservesInvariants) {
    const FifSystem sys = build_system(framework3());
    for (CoveringMode mode : {CoveringMode::Theorem, CoveringMode::AppendixCompat}) {
        const Covering c = build_covering(sys, 2, mode);
        const Covering back = parse_covering(covering_to_json(c));
        EXPECT_EQ(back.mode, mode);
        EXPECT_EQ(back.depth, 2u);
        EXPECT_EQ(back.map_count, 3u);
        EXPECT_EQ(back.theta, c.theta);
        EXPECT_EQ(back.big_m, c.big_m);
        ASSERT_EQ(back.rhombi.size(), 9u);
        for (std::size_t i = 0; i < 9; ++i) {
            EXPECT_EQ(back.rhombi[i].center, c.rhombi[i].center);
            EXPECT_EQ(back.rhombi[i].radius, c.rhombi[i].radius);
            EXPECT_EQ(back.rhombi[i].lipschitz, c.rhombi[i].lipschitz);
            EXPECT_EQ(back.word(i), c.word(i));
        }
        EXPECT_EQ(back.s_sorted, c.s_sorted);
        // Re-derived bounds agree with the stored ones.
        const RangeBounds rb = range_bounds(back);
        EXPECT_EQ(rb.lower, back.bounds.lower);
        EXPECT_EQ(rb.upper, back.bounds.upper);
        EXPECT_EQ(back.deviations, c.deviations);
        const AttractorSample s = chaos_game(sys, 5000, 1, 100);
        EXPECT_EQ(verify_containment(s, back, 1e-9 * sys.width()).violations, 0u);
    }
}

TEST(CoveringDocument, RejectsBadWords) {
    const std::string doc = R"({"format_version":1,"mode":"theorem","depth":1,"map_count":2,
        "theta":1,"big_m":1,"bounds":{"A":0,"B":1},
        "rhombi":[{"word":[3],"center":[0,0],"radius":1,"lipschitz":0.5}]})";
    EXPECT_THROW(parse_covering(doc), Error);
}

TEST(SampleCsv, HeaderAndRoundTrip) {
    const FifSystem sys = build_system(framework1());
    const AttractorSample s = chaos_game(sys, 500, 3, 10);
    const std::string csv = sample_to_csv(s);
    EXPECT_EQ(csv.substr(0, 4), "x,y\n");
    EXPECT_EQ(parse_points_csv(csv), s.points);
    EXPECT_THROW(parse_points_csv("a,b\n1,2\n"), Error);
    EXPECT_THROW(parse_points_csv("x,y\n1;2\n"), Error);
}

TEST(Reference, BundledTablesParse) {
    const ReferenceTable t1 = parse_reference(slurp(data_path("framework1_reference.json")));
    ASSERT_EQ(t1.rows.size(), 5u);
    EXPECT_EQ(t1.rows[0].lower, -5.2218);
    EXPECT_EQ(t1.rows[4].upper, 4.0393);
    const ReferenceTable t2 = parse_reference(slurp(data_path("framework2_reference.json")));
    EXPECT_EQ(t2.rows[4].lower, 0.3393);
    EXPECT_EQ(t2.rows[4].upper, 7.0176);
    const ReferenceTable t3 = parse_reference(slurp(data_path("framework3_reference.json")));
    EXPECT_EQ(t3.rows[0].lower, -335.3988);
    EXPECT_EQ(t3.rows[0].upper, 376.9781);
    EXPECT_THROW(parse_reference(R"({"rows":[{"depth":2,"A":0,"B":1}]})"), Error);
}

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

} // namespace

TEST(EmitSvg, PolygonPerRhombus) {
    Covering one;
    one.theta = 1.0;
    one.rhombi.push_back(Rhombus{{0, 0}, 1.0, 1.0, 0, 0.5});
    const InterpolationData data{{-1, 0, 1}, {0, 0, 0}, {0, 0}};
    EXPECT_EQ(count_of(emit_svg(one, data), "<polygon"), 1u);

    const FifSystem sys = build_system(framework1());
    const Covering c = build_covering(sys, 1);
    const std::string svg = emit_svg(c, sys.data);
    EXPECT_EQ(count_of(svg, "<polygon"), 4u);
    EXPECT_EQ(svg, emit_svg(c, sys.data));
    EXPECT_NE(svg.find("viewBox"), std::string::npos);
    // Upper vertex of the tallest rhombus is at -(B) in SVG coordinates.
    EXPECT_NE(svg.find(format_double(-c.bounds.upper)), std::string::npos);
}

TEST(EmitSvg, SampleOverlayIsDeterministic) {
    const FifSystem sys = build_system(framework3());
    const Covering c = build_covering(sys, 2);
    const AttractorSample s = chaos_game(sys, 1000, 8, 100);
    const std::string a = emit_svg(c, sys.data, &s);
    EXPECT_EQ(a, emit_svg(c, sys.data, &s));
    EXPECT_EQ(count_of(a, "<polygon"), 9u);
    EXPECT_EQ(count_of(a, "h0"), 1000u + 4u);
}

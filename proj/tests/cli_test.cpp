#include "fifcover/cli.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace fifcover;
using namespace fifcover::testing;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fifcover");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("fifcover_cli_test_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = temp_path(name);
    cli::write_file(path, content);
    return path;
}

} // namespace

TEST(Cli, HelpListsExitCodes) {
    const Result r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"cover"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"cover", "--input", data_path("framework1.json"), "--depth", "1", "--mode", "x"}).code,
              cli::kUsage);
}

TEST(Cli, ErrorExitCodes) {
    const std::string bad_json = write_temp("bad.json", "{ not json");
    const std::string too_few = write_temp("few.json", R"({"x":[0,100],"y":[0,0],"d":[0.5]})");
    EXPECT_EQ(run_cli({"cover", "--input", bad_json, "--depth", "1"}).code, cli::kParseError);
    const Result v = run_cli({"cover", "--input", too_few, "--depth", "1"});
    EXPECT_EQ(v.code, cli::kValidationError);
    EXPECT_NE(v.err.find("TooFewPoints"), std::string::npos);
    EXPECT_EQ(run_cli({"cover", "--input", data_path("framework2.json"), "--depth", "5", "--max-maps", "1000"})
                  .code,
              cli::kDepthCapExceeded);
    EXPECT_EQ(run_cli({"cover", "--input", temp_path("missing.json"), "--depth", "1"}).code, cli::kIoError);
}

TEST(Cli, RangeTable) {
    const Result r = run_cli({"range", "--input", data_path("framework1.json"), "--max-depth", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::size_t rows = 0;
    std::getline(lines, line);
    EXPECT_EQ(line, "m\tA_m\tB_m");
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 5u);
    EXPECT_NE(r.out.find("1\t-5.6167\t10.4535"), std::string::npos) << r.out;
}

TEST(Cli, RangeWithReferenceWritesReport) {
    const std::string report = temp_path("report.json");
    const Result r = run_cli({"range", "--input", data_path("framework1.json"), "--max-depth", "5",
                              "--reference", data_path("framework1_reference.json"), "--report", report});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("-5.2218"), std::string::npos);
    EXPECT_NE(r.out.find("appendix"), std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(report));
    EXPECT_EQ(doc["rows"].size(), 10u);
}

TEST(Cli, CheckFramework2) {
    const Result r = run_cli({"check", "--input", data_path("framework2.json"), "--depth", "3", "--points",
                              "100000", "--seed", "42"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("0 violations", 0), 0u) << r.out;
}

TEST(Cli, CoverWritesOutputs) {
    const std::string json = temp_path("cover.json");
    const std::string svg = temp_path("cover.svg");
    const std::string csv = temp_path("cover.csv");
    const std::string constant = write_temp("const.json", R"({"x":[0,1,2],"y":[3,3,3],"d":[0.2,0.2]})");
    const Result r = run_cli({"cover", "--input", constant, "--depth", "1", "--json", json, "--svg", svg, "--csv", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    const Covering c = parse_covering(slurp(json));
    ASSERT_EQ(c.rhombi.size(), 2u);
    for (const Rhombus& rh : c.rhombi) {
        EXPECT_NEAR(rh.center.y, 3.0, 1e-14);
        EXPECT_NEAR(rh.radius, c.rhombi[0].radius, 1e-14);
    }
    EXPECT_NE(slurp(svg).find("<svg"), std::string::npos);
    EXPECT_EQ(slurp(csv).rfind("word,u,v,radius,lipschitz\n", 0), 0u);
}

TEST(Cli, SampleAndRender) {
    const std::string csv = temp_path("sample.csv");
    ASSERT_EQ(run_cli({"sample", "--input", data_path("framework3.json"), "--points", "1000", "--seed", "7",
                       "--out", csv})
                  .code,
              0);
    EXPECT_EQ(parse_points_csv(slurp(csv)).size(), 1000u);
    const std::string svg = temp_path("render.svg");
    ASSERT_EQ(run_cli({"render", "--input", data_path("framework3.json"), "--depth", "2", "--svg", svg,
                       "--points", "500", "--seed", "7"})
                  .code,
              0);
    const std::string text = slurp(svg);
    EXPECT_NE(text.find("<polygon"), std::string::npos);
}

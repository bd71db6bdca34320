#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "savage/cli.hpp"

namespace {

std::string data(const std::string& name) { return std::string(SAVAGE_EXAMPLES_DIR) + "/" + name; }

struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "baru");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = savage::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "savage_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

bool has(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).rc, 2);
  EXPECT_EQ(run({"frobnicate"}).rc, 2);
  EXPECT_EQ(run({"scenario", "nope"}).rc, 2);
  EXPECT_EQ(run({"aggregate"}).rc, 2);
  EXPECT_EQ(run({"--help"}).rc, 0);
  const auto v = run({"--version"});
  EXPECT_EQ(v.rc, 0);
  EXPECT_TRUE(has(v.out, "0.1.0"));
}

TEST(Cli, AggregateTable1) {
  const auto r = run({"aggregate", data("table1.json"), "--acts", data("table1_acts.json")});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(has(r.out, "0.5/0.5")) << r.out;
  EXPECT_TRUE(has(r.out, "g ≻ f")) << r.out;
  EXPECT_TRUE(has(r.out, "1.7")) << r.out;
  const auto imposed = run({"aggregate", data("table1.json"), "--swf", "swf4"});
  ASSERT_EQ(imposed.rc, 0) << imposed.err;
  EXPECT_TRUE(has(imposed.out, "0.9/0.1")) << imposed.out;
}

TEST(Cli, AggregateIndifferentProfile) {
  const auto r = run({"aggregate", data("indifferent.json")});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(has(r.out, "complete indifference")) << r.out;
}

TEST(Cli, BadFilesExitTwoWithLocation) {
  const auto broken = run({"aggregate", data("broken.json")});
  EXPECT_EQ(broken.rc, 2);
  EXPECT_TRUE(has(broken.err, "broken.json:5:5:")) << broken.err;
  const auto bad = run({"aggregate", data("bad_density.json")});
  EXPECT_EQ(bad.rc, 2);
  EXPECT_TRUE(has(bad.err, "/agents/1/belief")) << bad.err;
  EXPECT_EQ(run({"aggregate", data("missing.json")}).rc, 2);
  EXPECT_EQ(run({"aggregate", data("table1.json"), "--swf", "swf9"}).rc, 2);
}

TEST(Cli, Scenarios) {
  const auto t = run({"scenario", "table1"});
  ASSERT_EQ(t.rc, 0) << t.err;
  EXPECT_TRUE(has(t.out, "0.2")) << t.out;
  EXPECT_TRUE(has(t.out, "0.9")) << t.out;
  const auto h = run({"scenario", "horses"});
  ASSERT_EQ(h.rc, 0) << h.err;
  const auto svg = scratch("fig1.svg"), csv = scratch("fig1.csv");
  const auto f = run({"scenario", "fig1", "--svg", svg.string(), "--csv", csv.string()});
  ASSERT_EQ(f.rc, 0) << f.err;
  EXPECT_TRUE(std::filesystem::file_size(svg) > 0);
  EXPECT_TRUE(has(savage::io::read_file(svg.string()), "<svg"));
  EXPECT_TRUE(has(savage::io::read_file(csv.string()), "ev1,ev2"));
}

TEST(Cli, Image) {
  const auto r = run({"image", data("table1.json")});
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto refused = run({"image", data("fig1.json"), "--restrict", "identity,q1"});
  EXPECT_EQ(refused.rc, 0);
  EXPECT_TRUE(has(refused.out, "refused, condition (i)")) << refused.out;
  const auto ok = run({"image", data("fig1.json"), "--restrict", "identity,q1,q2,q3,q4"});
  EXPECT_EQ(ok.rc, 0) << ok.out << ok.err;
  EXPECT_FALSE(has(ok.out, "refused")) << ok.out;
}

TEST(Cli, Distance) {
  const auto r = run({"distance", data("agent1.json"), data("agent2.json")});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(has(r.out, "1")) << r.out;
  const auto self = run({"distance", data("agent1.json"), data("agent1.json")});
  ASSERT_EQ(self.rc, 0);
  EXPECT_TRUE(has(self.out, "0")) << self.out;
  const auto flagged = run({"distance", data("table1.json") + "#1", data("table1.json") + "#3"});
  ASSERT_EQ(flagged.rc, 0) << flagged.err;
  EXPECT_TRUE(has(flagged.out, "metric")) << flagged.out;
  EXPECT_EQ(run({"distance", data("table1.json") + "#9", data("agent1.json")}).rc, 2);
}

TEST(Cli, AxiomReportExitCodesAndJson) {
  const auto good = scratch("baru.json"), bad = scratch("swf3.json");
  const auto ok = run({"axiom-report", data("table1.json"), "--trials", "30", "--threads", "2", "--out", good.string()});
  EXPECT_EQ(ok.rc, 0) << ok.out << ok.err;
  EXPECT_FALSE(has(ok.out, "refused")) << ok.out;
  const auto j = savage::io::Json::parse(savage::io::read_file(good.string()));
  EXPECT_EQ(j["swf"], "baru");
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["trials"], 30);
  EXPECT_EQ(j["matches_known_pattern"], true);

  const auto v = run({"axiom-report", data("table1.json"), "--swf", "swf3", "--trials", "30", "--out", bad.string()});
  EXPECT_EQ(v.rc, 1);
  const auto k = savage::io::Json::parse(savage::io::read_file(bad.string()));
  EXPECT_EQ(k["matches_known_pattern"], true);
  EXPECT_EQ(run({"axiom-report", "--trials", "0"}).rc, 2);
}

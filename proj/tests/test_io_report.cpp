#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "sftlab/sftlab.hpp"

using namespace sftlab;

namespace {

std::string error_field(const Json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, PresetExpansion) {
  unsetenv(kSeedEnv);
  const auto c = parse_config(Json::parse(R"({"measure": "golden-mean-parry", "system": "golden-mean"})"));
  EXPECT_NEAR(c.measure.transition()(0, 1), 1.0 / (std::numbers::phi * std::numbers::phi), 1e-12);
  const Json echo = c.echo();
  EXPECT_EQ(echo["measure"], "golden-mean-parry");
  EXPECT_EQ(echo["measure_expanded"]["transition"].size(), 2u);
  EXPECT_EQ(echo["seed_source"], "default");
  EXPECT_EQ(echo["seed"].get<std::uint64_t>(), kDefaultSeed);
}

TEST(Config, RowSumErrorNamesTheRow) {
  try {
    parse_config(Json::parse(R"({"measure": {"transition": [[0.5, 0.5], [0.49, 0.5]]}})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "measure.transition");
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(Config, FieldErrors) {
  EXPECT_EQ(error_field(Json::parse(R"({"mesure": "two-state-lazy"})")), "mesure");
  EXPECT_EQ(error_field(Json::parse(R"({"measure": "nope"})")), "measure.preset");
  EXPECT_EQ(error_field(Json::parse(R"({"depth": 0})")), "depth");
  EXPECT_EQ(error_field(Json::parse(R"({"seed": -3})")), "seed");
  EXPECT_EQ(error_field(Json::parse(R"({"format": "xml"})")), "format");
  EXPECT_EQ(error_field(Json::parse(R"({"system": {"alphabet": 2, "adjacency": [[1, 2], [1, 1]]}})")),
            "system.adjacency[0][1]");
  EXPECT_EQ(error_field(Json::parse(R"({"system": "golden-mean", "measure": "two-state-lazy"})")), "measure.preset");
  EXPECT_EQ(error_field(Json::parse(R"({"measure": {"preset": "full-2-bernoulli", "p": 1.5}})")), "measure.p");
}

TEST(Config, SeedSources) {
  setenv(kSeedEnv, "321", 1);
  EXPECT_EQ(parse_config(Json::object()).seed, 321u);
  EXPECT_EQ(parse_config(Json::object()).seed_source, "env");
  const auto c = parse_config(Json::parse(R"({"seed": "0x10"})"));
  EXPECT_EQ(c.seed, 16u);
  EXPECT_EQ(c.seed_source, "config");
  setenv(kSeedEnv, "abc", 1);
  EXPECT_THROW(parse_config(Json::object()), ConfigError);
  unsetenv(kSeedEnv);
}

TEST(Config, PartitionAndPointParsing) {
  const auto sys = SftSystem::full_shift(2);
  const auto p = parse_partition(Json::parse(R"({"window": [0, 1], "labels": {"00": 0, "01": 1, "10": 1, "11": 2}})"), sys);
  EXPECT_EQ(p.num_labels(), 3);
  const auto j = parse_partition(Json::parse(R"([{"window": [0, 0], "fine": true}, {"window": [2, 2], "fine": true}])"), sys);
  EXPECT_EQ(j.window_begin(), 0);
  EXPECT_EQ(j.window_end(), 2);
  EXPECT_THROW(parse_partition(Json::parse(R"({"window": [1, 0], "fine": true})"), sys), ConfigError);
  EXPECT_THROW(parse_partition(Json::parse(R"({"window": [0, 0], "labels": {"0": 0}})"), sys), ConfigError);

  const Point x = parse_point(Json::parse(R"({"left_period": "0", "center": "11", "right_period": "01", "origin_offset": 1})"), sys);
  EXPECT_EQ(x.at(-1), 1);
  EXPECT_EQ(x.at(0), 1);
  EXPECT_EQ(x.at(-2), 0);
  EXPECT_THROW(parse_point(Json::parse(R"({"left_period": "0", "center": "11"})"), sys), ConfigError);
  EXPECT_THROW(parse_point(Json::parse(R"({"left_period": "1", "center": "1", "right_period": "0"})"),
                           SftSystem::golden_mean()),
               ConfigError);
}

TEST(Report, JsonRoundTripAndCsvRows) {
  Report r;
  r.command = "test";
  r.inputs = Json{{"seed", 1}};
  r.add("h", 0.1234567890123456789, Provenance::bracketed(1e-10));
  r.check("g", "first", true, 1.0, "== 1");
  r.check("g", "second, with comma", false, std::nan(""), "finite",
          Provenance::sampled(10, 0.5, "hoeffding", "root/child"));
  const Json j = report_json(r);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(j["results"][0]["value"].get<double>(), 0.123456789012346);
  EXPECT_EQ(j["assertions"][1]["observed"], "nan");
  EXPECT_EQ(Json::parse(j.dump()), j);

  const std::string csv = report_csv(r);
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "group,name,passed,observed,expected,provenance");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, static_cast<int>(r.assertions.size()));
  EXPECT_NE(csv.find("\"second, with comma\""), std::string::npos);
}

TEST(Report, VerifyIsDeterministicPerSeed) {
  VerifyOptions o;
  o.only = {2, 10};
  o.seed = 99;
  const auto a = run_verify(o), b = run_verify(o);
  EXPECT_EQ(report_json(a.report).dump(), report_json(b.report).dump());
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.criteria.size(), 2u);
  EXPECT_FALSE(report_json(a.report).contains("timing"));
}

TEST(Report, ParseOnly) {
  EXPECT_EQ(parse_only("entropy"), (std::set<int>{1, 2, 3, 4}));
  EXPECT_EQ(parse_only("pairs"), (std::set<int>{9, 10, 11, 12, 13}));
  EXPECT_EQ(parse_only("3,7"), (std::set<int>{3, 7}));
  EXPECT_EQ(parse_only("all").size(), 14u);
  EXPECT_THROW(parse_only("15"), InvalidArgument);
}

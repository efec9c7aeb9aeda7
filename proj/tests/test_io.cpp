#include <gtest/gtest.h>

#include <algorithm>

#include <cmath>
#include <sstream>

#include "hetcycle/hetcycle.hpp"

using namespace hetcycle;

TEST(ParseLog, ValuesBelowDoubleRange) {
  EXPECT_DOUBLE_EQ(parse_log10("1e-600"), -600.0);
  EXPECT_DOUBLE_EQ(parse_log10("1E-6000"), -6000.0);
  EXPECT_NEAR(parse_log10("2.5e-3"), std::log10(2.5e-3), 1e-15);
  EXPECT_NEAR(parse_log10("0.1"), -1.0, 1e-15);
  EXPECT_NEAR(parse_log("1e-3"), std::log(1e-3), 1e-12);
  EXPECT_THROW(parse_log10("-1e-3"), InputError);
  EXPECT_THROW(parse_log10("0"), InputError);
  EXPECT_THROW(parse_log10("abc"), InputError);
  EXPECT_THROW(parse_log10("1e99999999999999999999"), InputError);
}

TEST(ParameterJson, RoundTrip) {
  for (const auto& p : presets()) {
    const Json j = to_json(p.params);
    EXPECT_EQ(j["case"], to_int(p.case_id));
    EXPECT_EQ(parameters_from_json(Json::parse(j.dump())), p.params);
  }
}

TEST(ParameterJson, Errors) {
  Json j = to_json(preset("fig9a").params);
  j.erase("e23");
  try {
    parameters_from_json(j);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("e23"), std::string::npos);
  }
  Json extra = to_json(preset("fig9a").params);
  extra["c43"] = 0.4;
  EXPECT_THROW(parameters_from_json(extra), InputError);
  Json text = to_json(preset("fig9a").params);
  text["d1"] = "1.1";
  EXPECT_THROW(parameters_from_json(text), InputError);
  EXPECT_THROW(parameters_from_json(to_json(preset("fig9a").params), 2), InputError);
  Json no_case = to_json(preset("fig9a").params);
  no_case.erase("case");
  EXPECT_THROW(parameters_from_json(no_case), InputError);
  EXPECT_EQ(parameters_from_json(no_case, 1), preset("fig9a").params);
  EXPECT_THROW(parameters_from_json(Json::array()), InputError);
  EXPECT_THROW(load_parameters("/nonexistent/params.json"), InputError);
}

TEST(ReportJson, StabilityReport) {
  const Json j = to_json(delta(preset("fig9a").params));
  EXPECT_EQ(j["case"], 1);
  EXPECT_EQ(j["predicted"], "stable");
  EXPECT_EQ(j["segments"].size(), 4u);
  EXPECT_EQ(j["segments"][0]["equilibrium"], 3);
  EXPECT_EQ(j["segments"][0]["shape"], "2x1");
  EXPECT_EQ(j["radially_stable"], true);
  EXPECT_DOUBLE_EQ(j["ratios"]["b2^(4)"].get<double>(), 1.3 / 0.8);
  // Shortest round-trip formatting.
  EXPECT_NE(j.dump().find("\"b2^(4)\":1.625"), std::string::npos);
}

TEST(ReportJson, EigenReport) {
  const ParameterSet p = preset("fig9a").params;
  const Json j = to_json(classify(p), radial_stability(p));
  EXPECT_EQ(j["theorem1"], true);
  ASSERT_EQ(j["equilibria"].size(), 4u);
  EXPECT_EQ(j["equilibria"][2]["contracting_count"], 2);
  EXPECT_EQ(j["equilibria"][1]["contracting_count"], 0);
  EXPECT_EQ(j["equilibria"][1]["entries"][0]["direction"], "radial-block");
}

TEST(Csv, SeventeenDigits) {
  EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_number(-600.0), "-600");
}

TEST(Csv, TrajectoryStrideAndBase10) {
  Trajectory tr;
  for (int k = 0; k < 5; ++k) tr.samples.push_back({double(k), Vec4{0, 0, 0, -std::log(10.0) * k}, {}});
  std::ostringstream os;
  write_trajectory_csv(os, tr, {2, true});
  std::istringstream rows(os.str());
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "t,u1,u2,u3,u4");
  for (double t : {0.0, 2.0, 4.0}) {
    ASSERT_TRUE(std::getline(rows, line));
    EXPECT_EQ(std::stod(line.substr(0, line.find(','))), t);
    EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), -t, 1e-14);
  }
  EXPECT_FALSE(std::getline(rows, line));
  std::ostringstream all;
  write_trajectory_csv(all, tr, {3, false});
  const std::string text = all.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);  // header, 0, 3, last
}

TEST(Csv, EventsAndSweep) {
  std::ostringstream ev;
  write_events_csv(ev, {{"min_u4", 1.5, Vec4{0, 0, 0, -7}}});
  EXPECT_EQ(ev.str(), "kind,t,u4\nmin_u4,1.5,-7\n");
  std::ostringstream sw;
  write_sweep_csv(sw, boundary_sweep(preset("fig9a").params, {"d3"}, 1.0, 2.0, 2));
  EXPECT_EQ(sw.str().substr(0, 12), "param,delta\n");
}

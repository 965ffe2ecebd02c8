#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "helidrop/classify.hpp"
#include "helidrop/error.hpp"
#include "helidrop/serialize.hpp"
#include "support.hpp"

using namespace helidrop;
using helidrop::testing::lowest_piece;
using nlohmann::json;

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, -7.659455054022614, 1e-300, 123456789.0, 4.72283004648621}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(EnumNames, Lowercase) {
  EXPECT_STREQ(to_string(Region::SpecialPoint827), "special_point_827");
  EXPECT_STREQ(to_string(Region::Omega2), "omega2");
  EXPECT_STREQ(to_string(GridMarker::OutOfDomain), "out_of_domain");
  EXPECT_STREQ(to_string(EmbeddingVerdict::SelfIntersecting), "self_intersecting");
  EXPECT_STREQ(to_string(TestFunction::ExpNu3), "exp_nu3");
  EXPECT_STREQ(to_string(Case::II), "ii");
  EXPECT_STREQ(to_string(ImmersionVerdict::DenseInAnnulus), "dense_in_annulus");
}

TEST(ProfileCsv, RoundTripIsExact) {
  const ProfileCurve c = lowest_piece(Params::case_two(0.2, 0.15, 5.0), 100);
  std::stringstream ss;
  write_profile_csv(c, ss);
  const ProfileCurve back = read_profile_csv(ss);
  ASSERT_EQ(back.samples.size(), c.samples.size());
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    EXPECT_EQ(back.samples[i].s, c.samples[i].s);
    EXPECT_EQ(back.samples[i].x, c.samples[i].x);
    EXPECT_EQ(back.samples[i].y, c.samples[i].y);
    EXPECT_EQ(back.samples[i].theta_tilde, c.samples[i].theta_tilde);
  }
}

TEST(ProfileCsv, MalformedInputThrows) {
  std::istringstream empty("");
  EXPECT_THROW(read_profile_csv(empty), IoFailure);
  std::istringstream header("a,b\n");
  EXPECT_THROW(read_profile_csv(header), IoFailure);
  std::istringstream short_row("s,x,y,xi1,xi2,theta,theta_tilde\n1,2,3\n");
  EXPECT_THROW(read_profile_csv(short_row), IoFailure);
  std::istringstream bad_num("s,x,y,xi1,xi2,theta,theta_tilde\n1,2,3,4,5,6,x7\n");
  EXPECT_THROW(read_profile_csv(bad_num), IoFailure);
  std::istringstream crlf("s,x,y,xi1,xi2,theta,theta_tilde\r\n1,2,3,4,5,6,nan\r\n");
  const ProfileCurve c = read_profile_csv(crlf);
  ASSERT_EQ(c.samples.size(), 1u);
  EXPECT_TRUE(std::isnan(c.samples[0].theta_tilde));
  EXPECT_THROW(import_profile_csv("/nonexistent/p.csv"), IoFailure);
}

TEST(GridCsv, UndefinedIsEmptyField) {
  std::ostringstream os;
  write_grid_csv({{1.5, 2.0, GridMarker::None, 0}, {2.0, std::nullopt, GridMarker::Asymptote, 1}}, os);
  EXPECT_EQ(os.str(), "c,delta_theta,marker,component\n1.5,2,none,0\n2,,asymptote,1\n");
}

TEST(Json, ClassifyDocument) {
  const json j = json::parse(classify_json(classify(Params::case_two(0.2, 0.15, *thresholds(0.2).c3))));
  EXPECT_EQ(j["region"], "beta3");
  EXPECT_EQ(j["params"]["case"], "ii");
  EXPECT_EQ(j["surfaces"].size(), 3u);
  EXPECT_EQ(j["surfaces"][0]["kind"].get<std::string>().empty(), false);
  EXPECT_TRUE(j["roots"].is_array());
}

TEST(Json, NonFiniteBecomesNull) {
  const json j = json::parse(delta_theta_json(Params::case_two(0.2, 0.15, 0.0), std::nan(""), std::nullopt));
  EXPECT_TRUE(j["delta_theta"].is_null());
  EXPECT_TRUE(j["immersion"].is_null());
  const json g = json::parse(grid_json(Params::case_two(0.2, 0.15, 0.0), {{1.0, std::nullopt, GridMarker::Jump, 2}}));
  EXPECT_FALSE(g["params"].contains("c"));
  EXPECT_TRUE(g["grid"][0]["delta_theta"].is_null());
  EXPECT_EQ(g["grid"][0]["marker"], "jump");
}

TEST(Json, StabilityUnboundedHeight) {
  StabilityReport rep;
  rep.bound1 = Bound1{1.0, -2.0, std::numeric_limits<double>::infinity(), false};
  StabilityContext ctx;
  ctx.params = Params::case_two(-10.0, 1.0, 0.0);
  ctx.h = 2.0;
  const json j = json::parse(stability_json(rep, ctx));
  EXPECT_TRUE(j["bound1"]["h_max"].is_null());
  EXPECT_TRUE(j["bound1"]["h_max_unbounded"].get<bool>());
  EXPECT_TRUE(j["bb"].is_null());
  EXPECT_FALSE(j.contains("potential_profile"));
}

TEST(Json, ErrorDocument) {
  const json j = json::parse(error_json("no_bracket", "nothing found"));
  EXPECT_EQ(j["error"]["kind"], "no_bracket");
  EXPECT_EQ(j["error"]["message"], "nothing found");
}

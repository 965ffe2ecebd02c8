#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "helidrop/classify.hpp"
#include "helidrop/error.hpp"
#include "support.hpp"

using namespace helidrop;

namespace {

constexpr double kPi = std::numbers::pi;

int count_kind(const ModuliVerdict& v, SurfaceKind k) {
  int n = 0;
  for (const SurfaceDescriptor& s : v.surfaces) n += s.kind == k;
  return n;
}

}  // namespace

TEST(Classify, RegionsAlongTheCAxisAtPointTwo) {
  const Thresholds t = thresholds(0.2);
  EXPECT_EQ(classify(Params::case_two(0.2, 0.15, 20.0)).region, Region::Empty);
  EXPECT_EQ(classify(Params::case_two(0.2, 0.15, 5.0)).region, Region::Omega3);
  EXPECT_EQ(classify(Params::case_two(0.2, 0.15, -2.0)).region, Region::Omega3);
  const ModuliVerdict o2 = classify(Params::case_two(0.2, 0.15, -0.9));
  EXPECT_EQ(o2.region, Region::Omega2);
  EXPECT_EQ(count_kind(o2, SurfaceKind::Regular), 2);
  const ModuliVerdict b1 = classify(Params::case_two(0.2, 0.15, t.c1));
  EXPECT_EQ(b1.region, Region::Beta1);
  ASSERT_EQ(b1.surfaces.size(), 1u);
  EXPECT_EQ(b1.surfaces[0].kind, SurfaceKind::Cylinder);
  EXPECT_NEAR(*b1.surfaces[0].radius, std::abs(t.R1), 1e-6);
}

TEST(Classify, Beta2HasCylinderAndRegular) {
  const ModuliVerdict v = classify(Params::case_two(0.2, 0.15, *thresholds(0.2).c2));
  EXPECT_EQ(v.region, Region::Beta2);
  EXPECT_EQ(count_kind(v, SurfaceKind::Cylinder), 1);
  EXPECT_EQ(count_kind(v, SurfaceKind::Regular), 1);
}

TEST(Classify, Beta3HasCylinderAndTwoExceptional) {
  const Thresholds t = thresholds(0.2);
  const ModuliVerdict v = classify(Params::case_two(0.2, 0.15, *t.c3));
  EXPECT_EQ(v.region, Region::Beta3);
  EXPECT_EQ(count_kind(v, SurfaceKind::Cylinder), 1);
  EXPECT_EQ(count_kind(v, SurfaceKind::Exceptional), 2);
  for (const SurfaceDescriptor& s : v.surfaces) {
    if (s.kind == SurfaceKind::Cylinder) {
      EXPECT_NEAR(*s.radius, *t.R3, 1e-6);
      EXPECT_EQ(s.orientation, -1);
    }
  }
}

TEST(Classify, SnapsOntoThresholds) {
  const double c3 = *thresholds(0.2).c3;
  const ModuliVerdict v = classify(Params::case_two(0.2, 0.15, c3 + 5e-10));
  EXPECT_TRUE(v.snapped);
  EXPECT_EQ(v.params.c, c3);
  EXPECT_EQ(v.region, Region::Beta3);
  const ModuliVerdict off = classify(Params::case_two(0.2, 0.15, c3 + 1e-6));
  EXPECT_FALSE(off.snapped);
  EXPECT_NE(off.region, Region::Beta3);
}

TEST(Classify, SpecialPoint) {
  const ModuliVerdict v = classify(Params::case_two(kSpecialA, 1.0, -9.0 / 8.0));
  EXPECT_EQ(v.region, Region::SpecialPoint827);
  EXPECT_EQ(count_kind(v, SurfaceKind::Cylinder), 1);
  EXPECT_EQ(count_kind(v, SurfaceKind::Exceptional), 1);
  for (const SurfaceDescriptor& s : v.surfaces) {
    if (s.kind == SurfaceKind::Cylinder) EXPECT_NEAR(*s.radius, 1.5, 1e-6);
  }
}

TEST(Classify, CaseOne) {
  const double c0 = case_one_c0();
  EXPECT_EQ(classify(Params::case_one(1.0, c0 - 1.0)).region, Region::Empty);
  const ModuliVerdict cyl = classify(Params::case_one(1.0, c0));
  EXPECT_EQ(cyl.region, Region::CaseICylinder);
  ASSERT_EQ(cyl.surfaces.size(), 1u);
  EXPECT_NEAR(*cyl.surfaces[0].radius, std::cbrt(2.0), 1e-6);
  const ModuliVerdict reg = classify(Params::case_one(1.0, 2.0));
  EXPECT_EQ(reg.region, Region::CaseIRegular);
  EXPECT_EQ(count_kind(reg, SurfaceKind::Regular), 1);
}

TEST(Classify, CmcAndNegativeCoupling) {
  EXPECT_EQ(classify(Params::case_two(0.0, 1.0, 0.5)).region, Region::Cmc);
  const Thresholds t = thresholds(-1.0);
  EXPECT_EQ(classify(Params::case_two(-1.0, 1.0, t.c1 - 0.5)).region, Region::Empty);
  EXPECT_EQ(classify(Params::case_two(-1.0, 1.0, t.c1)).region, Region::Beta1);
  EXPECT_EQ(classify(Params::case_two(-1.0, 1.0, t.c1 + 0.5)).region, Region::Omega1);
  EXPECT_THROW(classify(Params{0.2, 0.5, 1.0, 0.0}), ValidationError);
}

TEST(Classify, SurfacesSortedByRadius) {
  const ModuliVerdict v = classify(Params::case_two(0.2, 0.15, *thresholds(0.2).c3));
  for (std::size_t i = 1; i < v.surfaces.size(); ++i) EXPECT_LE(v.surfaces[i - 1].r_lo, v.surfaces[i].r_lo);
}

TEST(FlipOrientation, SameQuartic) {
  const Params p{0.3, 0.8, 1.2, -0.4};
  const Params f = flip_orientation(p);
  EXPECT_EQ(f.a, -0.3);
  EXPECT_EQ(f.lambda0, -0.8);
  EXPECT_EQ(f.c, 0.4);
  EXPECT_EQ(f.omega, 1.2);
  const Quartic q1 = build_quartic(p), q2 = build_quartic(f);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(q1.c[i], q2.c[i]);
}

TEST(StructuralValues, ByCoupling) {
  const Thresholds t = thresholds(0.2);
  const std::vector<double> s = structural_values(Params::case_two(0.2, 1.0, 0.0));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], *t.c2);
  EXPECT_EQ(s[1], *t.c3);
  EXPECT_EQ(s[2], 0.0);
  const std::vector<double> sp = structural_values(Params::case_two(kSpecialA, 1.0, 0.0));
  ASSERT_EQ(sp.size(), 2u);
  EXPECT_NEAR(sp[0], -9.0 / 8.0, 1e-12);
  EXPECT_EQ(sp[1], 0.0);
  EXPECT_EQ(structural_values(Params::case_two(-1.0, 1.0, 0.0)), std::vector<double>{0.0});
  EXPECT_EQ(structural_values(Params::case_one(1.0, 0.0)), std::vector<double>{0.0});
}

TEST(DefaultScanRange, ByCase) {
  const Thresholds t = thresholds(0.2);
  EXPECT_EQ(default_scan_range(Params::case_two(0.2, 1.0, 0.0)), std::make_pair(*t.c2, t.c1));
  const double cm = thresholds(-1.0).c1;
  EXPECT_EQ(default_scan_range(Params::case_two(-1.0, 1.0, 0.0)), std::make_pair(cm, cm + 20.0));
  EXPECT_EQ(default_scan_range(Params::case_one(1.0, 0.0)), std::make_pair(case_one_c0(), case_one_c0() + 20.0));
  EXPECT_EQ(default_scan_range(Params::case_two(1.0, 1.0, 0.0)).second, thresholds(1.0).c1);
}

TEST(DeltaThetaProfile, MarkersAtFeatures) {
  const Thresholds t = thresholds(0.2);
  const Params base = Params::case_two(0.2, 0.15, 0.0);
  const std::vector<GridEntry> g = delta_theta_profile(base, {*t.c2, -0.9, *t.c3, 0.0, 5.0, t.c1 + 1.0}, 2);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g[0].marker, GridMarker::Limit);
  EXPECT_NEAR(*g[0].delta_theta, branch_limit(0.2, 0.15, 2), 1e-12);
  EXPECT_EQ(g[1].marker, GridMarker::None);
  EXPECT_NEAR(*g[1].delta_theta, -8.028355519379989, 1e-9);
  EXPECT_EQ(g[2].marker, GridMarker::Asymptote);
  EXPECT_FALSE(g[2].delta_theta);
  EXPECT_EQ(g[3].marker, GridMarker::Jump);
  EXPECT_EQ(g[4].marker, GridMarker::None);
  EXPECT_EQ(g[5].marker, GridMarker::OutOfDomain);
  EXPECT_LT(g[1].component, g[4].component);
}

TEST(DeltaThetaProfile, ThreadCountDoesNotChangeValues) {
  std::vector<double> grid;
  for (int i = 0; i < 40; ++i) grid.push_back(-1.0 + 0.3 * i);
  const Params base = Params::case_two(0.2, 0.15, 0.0);
  const std::vector<GridEntry> g1 = delta_theta_profile(base, grid, 1), g4 = delta_theta_profile(base, grid, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(g1[i].marker, g4[i].marker);
    EXPECT_EQ(g1[i].delta_theta, g4[i].delta_theta);
  }
}

TEST(SolveForAngle, QuarterAndEighthTurns) {
  const Params base = Params::case_two(0.2, 0.15, 0.0);
  const SearchResult r4 = solve_for_rational(base, 1, 4);
  EXPECT_EQ(r4.n, 1);
  EXPECT_EQ(r4.m, 4);
  EXPECT_NEAR(r4.c_solution, 4.72283004648621, 1e-9);
  EXPECT_NEAR(delta_theta(r4.piece), kPi / 2, 1e-8);
  EXPECT_LE(r4.residual, 1e-8);
  EXPECT_LE(r4.bracket.first, r4.c_solution);
  EXPECT_GE(r4.bracket.second, r4.c_solution);
  const SearchResult r8 = solve_for_angle(base, kPi / 4);
  EXPECT_NEAR(r8.c_solution, 1.74529502381583, 1e-9);
  EXPECT_EQ(r8.n, 0);
}

TEST(SolveForAngle, NoBracketOutsideTheRange) {
  EXPECT_THROW(solve_for_angle(Params::case_two(0.2, 0.15, 0.0), 2 * kPi), NoBracket);
  EXPECT_THROW(solve_for_angle(Params::case_one(0.5, 0.0), -kPi), NoBracket);
}

TEST(EmbeddingPrecheck, QuarterTurnEmbedsEighthTurnAtPointTwoCrosses) {
  const Params base = Params::case_two(0.2, 0.15, 0.0);
  const EmbeddingReport e4 = embedding_precheck(solve_for_rational(base, 1, 4), 1024);
  EXPECT_EQ(e4.verdict, EmbeddingVerdict::Embeddable);
  EXPECT_GT(e4.segments, 4000u);
  const EmbeddingReport e8 = embedding_precheck(solve_for_rational(base, 1, 8), 1024);
  EXPECT_EQ(e8.verdict, EmbeddingVerdict::SelfIntersecting);
  EXPECT_TRUE(e8.crossing.has_value());
}

TEST(EmbeddingPrecheck, PolylineOracle) {
  ProfileCurve square;
  for (auto [x, y] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}}) {
    square.samples.push_back({0.0, x, y, 0.0, 0.0, 0.0, 0.0});
  }
  EXPECT_EQ(embedding_precheck(square).verdict, EmbeddingVerdict::Embeddable);
  ProfileCurve bow;
  for (auto [x, y] : {std::pair{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}) {
    bow.samples.push_back({0.0, x, y, 0.0, 0.0, 0.0, 0.0});
  }
  const EmbeddingReport r = embedding_precheck(bow);
  EXPECT_EQ(r.verdict, EmbeddingVerdict::SelfIntersecting);
  ASSERT_TRUE(r.crossing);
  EXPECT_NEAR(r.crossing->first, 0.5, 1e-12);
  EXPECT_NEAR(r.crossing->second, 0.5, 1e-12);
  SearchResult bad;
  bad.m = 0;
  EXPECT_THROW(embedding_precheck(bad), ValidationError);
}

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "helidrop/error.hpp"
#include "helidrop/geometry.hpp"
#include "helidrop/polynomial.hpp"
#include "helidrop/profile.hpp"

using namespace helidrop;

TEST(Params, CaseTags) {
  EXPECT_EQ(normalized_case(Params::case_one(1.0, 0.0)), Case::I);
  EXPECT_EQ(normalized_case(Params::case_two(0.2, 1.0, 0.0)), Case::II);
  EXPECT_EQ(normalized_case(Params{0.2, 0.5, 1.0, 0.0}), Case::General);
  EXPECT_EQ(normalized_case(Params{0.3, 0.0, 1.0, 0.0}), Case::General);
}

TEST(Params, ValidateRejectsNonPositiveOmegaAndNan) {
  EXPECT_THROW(validate(Params::case_two(0.2, 0.0, 1.0)), ValidationError);
  EXPECT_THROW(validate(Params::case_two(0.2, -1.0, 1.0)), ValidationError);
  EXPECT_THROW(validate(Params::case_two(std::nan(""), 1.0, 1.0)), ValidationError);
  EXPECT_THROW(validate(Params::case_two(0.2, 1.0, std::numeric_limits<double>::infinity())), ValidationError);
  EXPECT_NO_THROW(validate(Params::case_two(0.2, 0.15, -0.9)));
}

TEST(GValue, OriginIsZero) {
  EXPECT_EQ(g_value(Params::case_two(0.7, 3.0, 2.0), {0.0, 0.0}), 0.0);
}

TEST(GValue, CaseOneCylinderPointSitsOnC0) {
  // G(0, −∛2) = −2∛2 + (∛2)⁴/4 = −(3/2)∛2 = −3·2^(−2/3).
  const Params p = Params::case_one(0.8, 0.0);
  EXPECT_NEAR(g_value(p, {0.0, -std::cbrt(2.0)}), case_one_c0(), 1e-14);
  EXPECT_NEAR(case_one_c0(), -3.0 * std::pow(2.0, -2.0 / 3.0), 1e-15);
}

TEST(GValue, TracedLevelSetReproducesC) {
  const Params p = Params::case_two(0.2, 0.15, -0.9);
  const RootStructure rs = isolate_roots(build_quartic(p));
  for (const PositiveInterval& iv : rs.intervals) {
    for (const TSPoint& pt : trace_level_set(p, iv.lo, iv.hi, 200)) {
      EXPECT_NEAR(g_value(p, pt), -0.9, 1e-10);
    }
  }
}

TEST(GGradient, MatchesFiniteDifferences) {
  const Params p{0.3, 0.7, 1.3, 0.0};
  const TSPoint pt{0.4, -1.1};
  const auto g = g_gradient(p, pt);
  const double h = 1e-6;
  const double d1 = (g_value(p, {pt.xi1 + h, pt.xi2}) - g_value(p, {pt.xi1 - h, pt.xi2})) / (2 * h);
  const double d2 = (g_value(p, {pt.xi1, pt.xi2 + h}) - g_value(p, {pt.xi1, pt.xi2 - h})) / (2 * h);
  EXPECT_NEAR(g[0], d1, 1e-8);
  EXPECT_NEAR(g[1], d2, 1e-8);
}

TEST(GGradient, OrthogonalToTheFlow) {
  // G is a first integral: ∇G · (ξ₁′, ξ₂′) = 0 everywhere.
  for (const Params& p : {Params::case_two(0.2, 0.15, 0.0), Params::case_one(1.5, 0.0), Params{-0.4, 2.0, 0.6, 0.0}}) {
    for (double x1 : {-1.3, -0.2, 0.5, 2.0}) {
      for (double x2 : {-2.0, -0.4, 0.3, 1.7}) {
        const auto g = g_gradient(p, {x1, x2});
        const TsDerivative d = rhs(p, {x1, x2});
        EXPECT_NEAR(g[0] * d.dxi1 + g[1] * d.dxi2, 0.0, 1e-12 * (1 + std::abs(g[0]) + std::abs(g[1])));
      }
    }
  }
}

TEST(ConservationResidual, CylinderAtC1) {
  // Branch-1 cylinder: ξ₁ = 0, ξ₂ = −R₁, so Q̂ = −R₁ and r = R₁².
  const Thresholds t = thresholds(0.2);
  const Params p = Params::case_two(0.2, 0.15, t.c1);
  EXPECT_NEAR(conservation_residual(p, -t.R1, t.R1 * t.R1), 0.0, 1e-12);
  EXPECT_EQ(conservation_residual(Params::case_two(0.2, 1.0, 0.0), 0.0, 0.0), 0.0);
}

TEST(GaussMap, Substitutions) {
  const Params p = Params::case_two(0.2, 1.0, 0.0);
  const Vec3 n0 = gauss_map(p, {0.0, 1.0}, 0.7, 0.7);
  EXPECT_NEAR(n0.x, 0.0, 1e-15);
  EXPECT_NEAR(n0.y, -1.0, 1e-15);
  EXPECT_NEAR(n0.z, 0.0, 1e-15);
  const Vec3 n1 = gauss_map(p, {1.0, 0.3}, std::numbers::pi / 2 + 0.4, 0.4);
  EXPECT_NEAR(n1.x, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(n1.y, 0.0, 1e-15);
  EXPECT_NEAR(n1.z, -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(GaussMap, UnitLength) {
  const Params p = Params::case_two(-0.5, 2.3, 0.0);
  for (double x1 : {-3.0, -0.1, 0.0, 0.8, 5.0}) {
    for (double th : {0.0, 1.0, 4.0}) {
      EXPECT_NEAR(gauss_map(p, {x1, 0.5}, th, 0.37).norm(), 1.0, 1e-14);
    }
  }
}

TEST(Curvatures, FlatRoundCylinder) {
  const double R = 1.7;
  const Params p = Params::case_two(0.2, 0.9, 0.0);
  const GeomSample g = curvatures(p, {0.0, R}, -1.0 / R);
  EXPECT_EQ(g.k, 0.0);
  EXPECT_EQ(g.nu3, 0.0);
  EXPECT_DOUBLE_EQ(g.qhat, R);
  EXPECT_DOUBLE_EQ(g.area_density, 1.0);
}

TEST(Curvatures, NormalComponentAndSupport) {
  const Params p = Params::case_two(0.2, 0.15, 0.0);
  const TSPoint pt{1.2, -0.7};
  const GeomSample g = curvatures(p, pt);
  const double S = std::sqrt(1 + 0.15 * 0.15 * 1.44);
  EXPECT_NEAR(g.nu3, 0.15 * 1.2 / S, 1e-15);
  EXPECT_LT(std::abs(g.nu3), 1.0);
  EXPECT_NEAR(g.qhat, -0.7 / S, 1e-15);
  EXPECT_NEAR(2 * g.h, 1.0 - 0.2 * pt.r() / 2, 1e-15);
  // K = −ω²ξ₁′/S⁴ with ξ₁′ from the flow.
  EXPECT_NEAR(g.k, -0.0225 * rhs(p, pt).dxi1 / (S * S * S * S), 1e-15);
}

TEST(Curvatures, VanishingPitchIsFlat) {
  const GeomSample g = curvatures(Params::case_two(0.2, 1e-12, 0.0), {0.8, 0.4});
  EXPECT_NEAR(g.k, 0.0, 1e-20);
}

TEST(ProfileCurvature, CylinderFixedPointIsStationary) {
  // Solve 2 + ξ₂(2Λ₀ − aξ₂²) = 0 by bisection; both f's vanish there.
  struct Case {
    double a, lambda0, lo, hi;
  } cases[] = {{0.2, 1.0, -1.3, -1.0}, {0.2, 1.0, 3.0, 4.0}, {-1.0, 0.0, -2.0, -1.0}, {-2.0, 1.0, -1.0, -0.1}};
  for (const Case& c : cases) {
    auto f = [&](double x) { return 2 + x * (2 * c.lambda0 - c.a * x * x); };
    double lo = c.lo, hi = c.hi;
    ASSERT_LT(f(lo) * f(hi), 0.0);
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
    }
    const Params p{c.a, c.lambda0, 0.77, 0.0};
    const TsDerivative d = rhs(p, {0.0, 0.5 * (lo + hi)});
    EXPECT_NEAR(d.dxi1, 0.0, 1e-13);
    EXPECT_EQ(d.dxi2, 0.0);
  }
}

TEST(Rhs, Dxi2VanishesOnTheAxisLine) {
  const Params p = Params::case_two(0.4, 1.1, 0.0);
  for (double x2 : {-2.0, 0.3, 4.0}) EXPECT_EQ(rhs(p, {0.0, x2}).dxi2, 0.0);
}

TEST(StabilityPotential, RoundCylinder) {
  // The branch-i cylinder sits at ξ₁ = 0, ξ₂ = −Rᵢ: 4H² = 1/R², K = 0, Q̂ = ξ₂.
  const Thresholds t = thresholds(0.2);
  for (double R : {*t.R2, *t.R3, t.R1}) {
    const Params p = Params::case_two(0.2, 0.15, 0.0);
    EXPECT_NEAR(stability_potential(p, {0.0, -R}), 1.0 / (R * R) - 0.2 * R, 1e-12);
  }
}

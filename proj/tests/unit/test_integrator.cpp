#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "helidrop/error.hpp"
#include "helidrop/integrator.hpp"

using namespace helidrop;

namespace {

// x'' = −x in the first two slots; the other two carry t and a spectator.
OdeState oscillator(const OdeState& y) { return {y[1], -y[0], 1.0, 0.0}; }
double energy(const OdeState& y) { return 0.5 * (y[0] * y[0] + y[1] * y[1]); }

}  // namespace

TEST(Dp45, HarmonicOscillatorOverTenPeriods) {
  Dp45 ode(oscillator, energy, {1.0, 0.0, 0.0, 0.0});
  const double T = 20 * std::numbers::pi;
  while (ode.s() < T) ode.advance(T - ode.s());
  EXPECT_NEAR(ode.s(), T, 1e-12);
  EXPECT_NEAR(ode.state()[0], 1.0, 1e-8);
  EXPECT_NEAR(ode.state()[1], 0.0, 1e-8);
  EXPECT_NEAR(ode.state()[2], T, 1e-10);
  EXPECT_LE(ode.stats().max_drift, ode.control().drift_tol);
  EXPECT_GT(ode.stats().accepted, 10u);
}

TEST(Dp45, StepRespectsCap) {
  Dp45 ode(oscillator, energy, {1.0, 0.0, 0.0, 0.0});
  EXPECT_LE(ode.advance(1e-4), 1e-4);
  EXPECT_NEAR(ode.s(), 1e-4, 1e-18);
}

TEST(Dp45, SingleStepIsFifthOrder) {
  // Halving h should shrink the one-step error by ≈ 2⁶.
  Dp45 ode(oscillator, energy, {1.0, 0.0, 0.0, 0.0});
  const OdeState y0{1.0, 0.0, 0.0, 0.0};
  const double e1 = std::abs(ode.trial_from(y0, 0.2)[0] - std::cos(0.2));
  const double e2 = std::abs(ode.trial_from(y0, 0.1)[0] - std::cos(0.1));
  EXPECT_GT(e1 / e2, 40.0);
  EXPECT_LT(e1 / e2, 90.0);
}

TEST(Dp45, BudgetExhaustionThrows) {
  StepControl c;
  c.max_steps = 5;
  Dp45 ode(oscillator, energy, {1.0, 0.0, 0.0, 0.0}, c);
  EXPECT_THROW(
      {
        for (int i = 0; i < 100; ++i) ode.advance(1.0);
      },
      ConservationBlown);
}

TEST(Dp45, UnreachableDriftToleranceThrows) {
  StepControl c;
  c.drift_tol = 0.0;
  c.h_min = 1e-6;
  // Any nonzero step changes this "invariant".
  Dp45 ode(oscillator, [](const OdeState& y) { return y[2]; }, {1.0, 0.0, 0.0, 0.0}, c);
  EXPECT_THROW(ode.advance(1.0), ConservationBlown);
}

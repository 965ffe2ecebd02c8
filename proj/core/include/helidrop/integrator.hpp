#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace helidrop {

/// (ξ₁, ξ₂, θ, θ̃): TreadmillSled point, tangent angle and polar angle.
using OdeState = std::array<double, 4>;
using OdeRhs = std::function<OdeState(const OdeState&)>;
using OdeInvariant = std::function<double(const OdeState&)>;

struct StepControl {
  double rtol = 1e-11;
  double atol = 1e-12;
  double drift_tol = 1e-9;  ///< reject a step whose invariant drift exceeds this
  double h_init = 1e-3;
  double h_min = 1e-14;
  double h_max = 0.25;
  std::size_t max_steps = 5'000'000;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double max_drift = 0.0;
};

/// Dormand–Prince 5(4) for an autonomous system, with step acceptance keyed
/// to both the embedded error estimate and the drift of a first integral.
class Dp45 {
 public:
  Dp45(OdeRhs f, OdeInvariant invariant, const OdeState& y0, StepControl ctrl = {});

  /// One accepted step of size at most h_cap from the current state.
  /// Returns the size actually taken. Throws ConservationBlown if the step
  /// size underflows h_min.
  double advance(double h_cap);

  /// The fifth-order solution of a single uncontrolled step of size h from y.
  OdeState trial_from(const OdeState& y, double h) const;

  const OdeState& state() const { return y_; }
  double s() const { return s_; }
  double invariant0() const { return g0_; }
  const IntegrationStats& stats() const { return stats_; }
  const StepControl& control() const { return ctrl_; }

 private:
  OdeState step(const OdeState& y, const OdeState& k1, double h, OdeState* err) const;

  OdeRhs f_;
  OdeInvariant inv_;
  StepControl ctrl_;
  OdeState y_;
  OdeState k1_;
  double s_ = 0.0;
  double h_;
  double g0_;
  IntegrationStats stats_;
};

}  // namespace helidrop

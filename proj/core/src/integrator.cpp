#include "helidrop/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "helidrop/error.hpp"

namespace helidrop {

namespace {

// Dormand–Prince tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

OdeState axpy(const OdeState& y, double h, std::initializer_list<std::pair<double, const OdeState*>> terms) {
  OdeState out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (const auto& [w, k] : terms) acc += w * (*k)[i];
    out[i] += h * acc;
  }
  return out;
}

}  // namespace

Dp45::Dp45(OdeRhs f, OdeInvariant invariant, const OdeState& y0, StepControl ctrl)
    : f_(std::move(f)), inv_(std::move(invariant)), ctrl_(ctrl), y_(y0), h_(ctrl.h_init) {
  k1_ = f_(y_);
  g0_ = inv_(y_);
}

OdeState Dp45::step(const OdeState& y, const OdeState& k1, double h, OdeState* err) const {
  const OdeState k2 = f_(axpy(y, h, {{a21, &k1}}));
  const OdeState k3 = f_(axpy(y, h, {{a31, &k1}, {a32, &k2}}));
  const OdeState k4 = f_(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const OdeState k5 = f_(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const OdeState k6 = f_(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const OdeState y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  if (err) {
    const OdeState k7 = f_(y5);
    for (std::size_t i = 0; i < y.size(); ++i) {
      (*err)[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
  }
  return y5;
}

OdeState Dp45::trial_from(const OdeState& y, double h) const { return step(y, f_(y), h, nullptr); }

double Dp45::advance(double h_cap) {
  if (stats_.accepted + stats_.rejected >= ctrl_.max_steps) {
    throw ConservationBlown("step budget exhausted");
  }
  for (;;) {
    const double h = std::min({h_, h_cap, ctrl_.h_max});
    if (h < ctrl_.h_min && h < h_cap) {
      std::ostringstream os;
      os << "step size underflow at s=" << s_ << " (drift " << std::abs(inv_(y_) - g0_) << ")";
      throw ConservationBlown(os.str());
    }
    OdeState err{};
    const OdeState y1 = step(y_, k1_, h, &err);
    double norm = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i) {
      const double sc = ctrl_.atol + ctrl_.rtol * std::max(std::abs(y_[i]), std::abs(y1[i]));
      norm = std::max(norm, std::abs(err[i]) / sc);
    }
    const double drift = std::abs(inv_(y1) - g0_);
    const bool finite = std::isfinite(norm) && std::isfinite(drift);
    if (finite && norm <= 1.0 && drift <= ctrl_.drift_tol) {
      const double grow = norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
      // Only grow from the step actually taken when it was not capped.
      if (h == h_ || h_cap >= h_) h_ = h * std::clamp(grow, 0.2, 5.0);
      y_ = y1;
      s_ += h;
      k1_ = f_(y_);
      stats_.max_drift = std::max(stats_.max_drift, drift);
      ++stats_.accepted;
      return h;
    }
    ++stats_.rejected;
    if (finite && norm > 1.0) {
      h_ = h * std::clamp(0.9 * std::pow(norm, -0.25), 0.1, 0.5);
    } else {
      h_ = 0.5 * h;
    }
  }
}

}  // namespace helidrop

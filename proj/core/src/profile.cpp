#include "helidrop/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "helidrop/error.hpp"

namespace helidrop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double q_of(const Params& p, double r) { return 4.0 * p.c + r * (-4.0 * p.lambda0 + p.a * r); }

OdeState flow(const Params& p, const OdeState& y) {
  const TSPoint pt{y[0], y[1]};
  const double k = profile_curvature(p, pt);
  return {1.0 - y[1] * k, y[0] * k, k, y[1] / pt.r()};
}

Dp45 make_solver(const Params& p, const OdeState& y0, const StepControl& ctrl) {
  return Dp45([p](const OdeState& y) { return flow(p, y); },
              [p](const OdeState& y) { return g_value(p, {y[0], y[1]}); }, y0, ctrl);
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_not_stalled(const Params& p, const OdeState& y, double s) {
  const TsDerivative d = rhs(p, {y[0], y[1]});
  if (std::hypot(d.dxi1, d.dxi2) < 1e-12) {
    std::ostringstream os;
    os << "trajectory sits on a fixed point (cylinder) at s=" << s;
    throw StalledAtFixedPoint(os.str());
  }
}

}  // namespace

ProfileSample make_sample(double s, const OdeState& y) {
  const double c = std::cos(y[2]), sn = std::sin(y[2]);
  return {s, y[0] * c + y[1] * sn, y[0] * sn - y[1] * c, y[0], y[1], y[2], y[3]};
}

TsDerivative rhs(const Params& p, TSPoint pt) {
  const double k = profile_curvature(p, pt);
  return {1.0 - pt.xi2 * k, pt.xi1 * k, k};
}

TSPoint rho(const Params& p, double r) {
  const Quartic quart = build_quartic(p);
  const double q = q_of(p, r);
  const double w = std::sqrt(64.0 + q * q * p.omega * p.omega);
  return {std::sqrt(std::max(quart(r), 0.0)) / w, q * std::sqrt(1.0 + r * p.omega * p.omega) / w};
}

std::vector<TSPoint> trace_level_set(const Params& p, double r_lo, double r_hi, int n) {
  if (n < 2) throw ValidationError("trace_level_set needs n >= 2");
  if (!(r_hi > r_lo)) return {rho(p, r_lo)};
  std::vector<TSPoint> half;
  half.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double u = 0.5 * (1.0 - std::cos(std::numbers::pi * k / (n - 1)));
    const double r = (k == n - 1) ? r_hi : r_lo + (r_hi - r_lo) * u;
    TSPoint pt = rho(p, r);
    if (k == 0 || k == n - 1) pt.xi1 = 0.0;
    half.push_back(pt);
  }
  std::vector<TSPoint> out = half;
  for (int k = n - 2; k >= 1; --k) out.push_back({-half[k].xi1, half[k].xi2});
  return out;
}

ProfileCurve integrate_piece(const FundamentalPieceSpec& spec, const PieceOptions& opt) {
  if (!spec.simple()) throw ValidationError("piece has a multiple endpoint; use integrate_exceptional");
  if (!(spec.r_lo > 0.0)) throw ValidationError("piece reaches the axis (r_lo = 0); the polar angle jumps");
  if (opt.samples < 2) throw ValidationError("need at least 2 samples per piece");

  const Params& p = spec.params;
  const double length = *arc_length(spec);
  const double ds = length / opt.samples;

  const double xi2_0 = (q_of(p, spec.r_lo) < 0.0 ? -1.0 : 1.0) * std::sqrt(spec.r_lo);
  const OdeState y0{0.0, xi2_0, std::atan2(xi2_0, 0.0), 0.0};
  check_not_stalled(p, y0, 0.0);

  ProfileCurve curve;
  curve.params = p;
  curve.r_lo = spec.r_lo;
  curve.r_hi = spec.r_hi;
  curve.samples.reserve(static_cast<std::size_t>(opt.samples) + 1);
  curve.samples.push_back(make_sample(0.0, y0));

  Dp45 ode = make_solver(p, y0, opt.ctrl);
  double side = sign_of(rhs(p, {0.0, xi2_0}).dxi1);
  int crossings = 0;
  int next_k = 1;

  for (;;) {
    const OdeState before = ode.state();
    const double s_before = ode.s();
    const double cap = next_k < opt.samples ? next_k * ds - s_before : std::numeric_limits<double>::infinity();
    const double h = ode.advance(cap > 0.0 ? cap : ds);
    const OdeState& now = ode.state();

    if (sign_of(now[0]) == -side) {
      side = -side;
      if (++crossings == 2) {
        // Return to ξ₁ = 0 on the starting side: locate it within this step.
        auto g = [&](double t) { return ode.trial_from(before, t)[0]; };
        double t_star = 0.0;
        if (before[0] != 0.0) {
          boost::uintmax_t iters = 100;
          const auto [lo, hi] = boost::math::tools::toms748_solve(
              g, 0.0, h, before[0], now[0], boost::math::tools::eps_tolerance<double>(50), iters);
          t_star = 0.5 * (lo + hi);
        }
        OdeState end = ode.trial_from(before, t_star);
        end[0] = 0.0;
        curve.samples.push_back(make_sample(s_before + t_star, end));
        curve.ts_closure = std::hypot(end[0] - y0[0], end[1] - y0[1]);
        break;
      }
    }
    check_not_stalled(p, now, ode.s());
    if (h == cap) {
      curve.samples.push_back(make_sample(ode.s(), now));
      ++next_k;
    }
  }

  curve.stats = ode.stats();
  curve.piece_length = curve.samples.back().s;
  curve.group_angle = curve.samples.back().theta_tilde - curve.samples.front().theta_tilde;
  return curve;
}

ProfileCurve assemble_profile(const ProfileCurve& piece, int k) {
  if (k < 1) throw ValidationError("assemble_profile needs k >= 1");
  if (piece.samples.empty()) throw EmptyProfile("cannot assemble an empty piece");
  ProfileCurve out = piece;
  out.piece_count = piece.piece_count * k;
  out.samples.clear();
  out.samples.reserve(piece.samples.size() * static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const double ang = j * piece.group_angle;
    const double c = std::cos(ang), sn = std::sin(ang);
    for (std::size_t i = (j == 0 ? 0 : 1); i < piece.samples.size(); ++i) {
      ProfileSample smp = piece.samples[i];
      const double x = smp.x, y = smp.y;
      smp.x = c * x - sn * y;
      smp.y = sn * x + c * y;
      smp.theta += ang;
      smp.theta_tilde += ang;
      smp.s += j * piece.piece_length;
      out.samples.push_back(smp);
    }
  }
  return out;
}

double closure_gap(const ProfileCurve& curve) {
  if (curve.samples.empty()) throw EmptyProfile("closure gap of an empty profile");
  const ProfileSample& a = curve.samples.front();
  const ProfileSample& b = curve.samples.back();
  return std::hypot(b.x - a.x, b.y - a.y);
}

namespace {

struct OutboundLeg {
  std::vector<double> s;        // accepted step starts
  std::vector<OdeState> y;      // states at those starts
  double turn_s = 0.0;          // arc length of the far turning point (ξ₁ = 0)
  OdeState turn{};
  IntegrationStats stats;
};

OdeState exceptional_start(const Params& p, const Quartic& quart, double r_star, int mult, bool inner, double rel_gap) {
  const double dr = (inner ? -1.0 : 1.0) * rel_gap * std::max(1.0, r_star);
  const double r0 = r_star + dr;
  // p near the multiple root through its deflated quotient, which stays accurate there.
  const Polynomial quo = quart.poly().deflate(r_star, mult);
  double pv = quo(r0);
  for (int i = 0; i < mult; ++i) pv *= dr;
  if (!(pv > 0.0)) throw ValidationError("start point is outside the positivity interval");
  const double q = q_of(p, r0);
  const double w = std::sqrt(64.0 + q * q * p.omega * p.omega);
  const double xi1 = (inner ? -1.0 : 1.0) * std::sqrt(pv) / w;
  const double xi2 = q * std::sqrt(1.0 + r0 * p.omega * p.omega) / w;
  return {xi1, xi2, std::atan2(xi2, xi1), 0.0};
}

// From next to the multiple root out to the far endpoint of the interval.
OutboundLeg outbound_leg(const Params& p, const OdeState& y0, const StepControl& ctrl) {
  OutboundLeg leg;
  Dp45 ode = make_solver(p, y0, ctrl);
  const double side = sign_of(y0[0]);
  for (;;) {
    const OdeState before = ode.state();
    const double s_before = ode.s();
    const double h = ode.advance(std::numeric_limits<double>::infinity());
    leg.s.push_back(s_before);
    leg.y.push_back(before);
    if (sign_of(ode.state()[0]) == -side) {
      auto g = [&](double t) { return ode.trial_from(before, t)[0]; };
      boost::uintmax_t iters = 100;
      const auto [lo, hi] = boost::math::tools::toms748_solve(
          g, 0.0, h, before[0], ode.state()[0], boost::math::tools::eps_tolerance<double>(50), iters);
      const double t_star = 0.5 * (lo + hi);
      leg.turn_s = s_before + t_star;
      leg.turn = ode.trial_from(before, t_star);
      break;
    }
  }
  leg.stats = ode.stats();
  return leg;
}

OdeState leg_state_at(const Dp45& ode, const OutboundLeg& leg, double s) {
  if (s >= leg.turn_s) return leg.turn;
  const auto it = std::upper_bound(leg.s.begin(), leg.s.end(), s);
  const std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - leg.s.begin() - 1, 0));
  return ode.trial_from(leg.y[k], s - leg.s[k]);
}

}  // namespace

ExceptionalProfile integrate_exceptional(const Params& p, ExceptionalSide side, double s_max,
                                         const ExceptionalOptions& opt) {
  if (!(s_max > 0.0)) throw ValidationError("s_max must be positive");
  if (opt.samples < 2) throw ValidationError("need at least 2 samples");
  const Quartic quart = build_quartic(p);
  const RootStructure rs = isolate_roots(quart);
  const bool inner = side == ExceptionalSide::Inner;

  const PositiveInterval* iv = nullptr;
  for (const PositiveInterval& cand : rs.intervals) {
    if ((inner && cand.hi_mult >= 2) || (!inner && cand.lo_mult >= 2)) {
      iv = &cand;
      break;
    }
  }
  if (!iv) {
    throw ValidationError(std::string("no exceptional level curve on the ") + (inner ? "inner" : "outer") +
                          " side of a multiple root");
  }
  const double r_star = inner ? iv->hi : iv->lo;
  const int mult = inner ? iv->hi_mult : iv->lo_mult;

  // The multiple root is a saddle of the phase flow, so a trajectory run
  // straight back into it drifts off along the other branch. Only the
  // outbound half is integrated; the return half is its mirror image
  // (ξ₁ → −ξ₁ reverses the flow), which reaches the root as closely as the
  // start did. Without an explicit start gap, the gap shrinks until the
  // mirrored return covers s_max.
  double rel_gap = opt.start_gap.value_or(mult == 2 ? 1e-9 : 1e-3);
  const double gap_floor = mult == 2 ? 1e-15 : 1e-5;
  OdeState y0;
  OutboundLeg leg;
  for (;;) {
    y0 = exceptional_start(p, quart, r_star, mult, inner, rel_gap);
    leg = outbound_leg(p, y0, opt.ctrl);
    if (opt.start_gap || 2.0 * leg.turn_s >= s_max || rel_gap <= gap_floor) break;
    rel_gap = std::max(rel_gap * 1e-3, gap_floor);
  }

  ExceptionalProfile out;
  ProfileCurve& curve = out.curve;
  curve.params = p;
  curve.r_lo = iv->lo;
  curve.r_hi = iv->hi;

  const Dp45 probe = make_solver(p, y0, opt.ctrl);
  const double L = leg.turn_s;
  const OdeState& yt = leg.turn;
  const double ds = s_max / opt.samples;
  std::optional<Dp45> tail;  // continues past the resolved return, if s_max demands it
  IntegrationStats stats = leg.stats;
  for (int k = 0; k <= opt.samples; ++k) {
    const double s = (k == opt.samples) ? s_max : k * ds;
    OdeState y;
    if (s <= L) {
      y = leg_state_at(probe, leg, s);
    } else if (s <= 2.0 * L) {
      const OdeState m = leg_state_at(probe, leg, 2.0 * L - s);
      y = {-m[0], m[1], 2.0 * yt[2] - m[2], 2.0 * yt[3] - m[3]};
    } else {
      if (!tail) {
        tail.emplace(make_solver(p, OdeState{-y0[0], y0[1], 2.0 * yt[2] - y0[2], 2.0 * yt[3] - y0[3]}, opt.ctrl));
      }
      const double target = s - 2.0 * L;
      while (tail->s() < target) {
        const double cap = target - tail->s();
        if (tail->advance(cap) == cap) break;
      }
      y = tail->state();
    }
    curve.samples.push_back(make_sample(s, y));
  }
  if (tail) {
    stats.accepted += tail->stats().accepted;
    stats.rejected += tail->stats().rejected;
    stats.max_drift = std::max(stats.max_drift, tail->stats().max_drift);
  }
  curve.stats = stats;
  curve.piece_length = s_max;
  curve.group_angle = std::numeric_limits<double>::quiet_NaN();

  SpiralDiagnostics& sp = out.spiral;
  sp.r_star = r_star;
  sp.limit_radius = std::sqrt(r_star);
  sp.start_gap = rel_gap;
  sp.turn_s = L;
  sp.resolved_s = 2.0 * L;
  auto gap = [&](const ProfileSample& smp) { return std::abs(std::sqrt(smp.r()) - sp.limit_radius); };
  sp.final_gap = gap(curve.samples.back());
  sp.winding = curve.samples.back().theta_tilde - curve.samples.front().theta_tilde;
  std::size_t i = curve.samples.size() - 1;
  while (i > 0 && gap(curve.samples[i - 1]) >= gap(curve.samples[i])) --i;
  sp.monotone_from = curve.samples[i].s;
  double max_drift = 0.0;
  for (const ProfileSample& smp : curve.samples) {
    max_drift = std::max(max_drift, std::abs(g_value(p, {smp.xi1, smp.xi2}) - g_value(p, {y0[0], y0[1]})));
  }
  sp.max_drift = std::max(max_drift, stats.max_drift);
  return out;
}

int cylinder_orientation(const Params& p, double r_star) {
  const double R = std::sqrt(r_star);
  auto residual = [&](double xi2) { return std::abs(2.0 + xi2 * (2.0 * p.lambda0 - p.a * xi2 * xi2)); };
  return residual(R) <= residual(-R) ? 1 : -1;
}

ProfileCurve cylinder_profile(const Params& p, double r_star, int samples) {
  if (samples < 3) throw ValidationError("cylinder profile needs at least 3 samples");
  const double R = std::sqrt(r_star);
  const double sg = cylinder_orientation(p, r_star);
  ProfileCurve curve;
  curve.params = p;
  curve.r_lo = curve.r_hi = r_star;
  curve.piece_length = kTwoPi * R;
  curve.group_angle = sg * kTwoPi;
  const double theta0 = std::atan2(sg * R, 0.0);
  for (int k = 0; k <= samples; ++k) {
    const double s = curve.piece_length * k / samples;
    const double tt = sg * s / R;
    curve.samples.push_back({s, R * std::cos(tt), R * std::sin(tt), 0.0, sg * R, theta0 + tt, tt});
  }
  return curve;
}

RationalApprox rational_angle(double delta_theta, int m_max) {
  if (m_max < 1) throw ValidationError("m_max must be >= 1");
  const double x = delta_theta / kTwoPi;
  const double ax = std::abs(x);
  long h2 = 0, h1 = 1, k2 = 1, k1 = 0;
  long best_n = std::lround(std::floor(ax)), best_m = 1;
  double t = ax;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(t);
    if (a > 1e12) break;
    const long ai = static_cast<long>(a);
    const long h = ai * h1 + h2, k = ai * k1 + k2;
    if (k > m_max) break;
    best_n = h;
    best_m = k;
    h2 = h1, h1 = h, k2 = k1, k1 = k;
    const double frac = t - a;
    if (frac < 1e-15) break;
    t = 1.0 / frac;
  }
  RationalApprox out;
  out.n = x < 0.0 ? -best_n : best_n;
  out.m = best_m;
  out.residual = std::abs(delta_theta - kTwoPi * static_cast<double>(out.n) / static_cast<double>(out.m));
  return out;
}

ImmersionReport immersion_report(const FundamentalPieceSpec& spec, double rationality_tol, int m_max) {
  ImmersionReport rep;
  rep.r_min = std::sqrt(spec.r_lo);
  rep.r_max = std::sqrt(spec.r_hi);
  if (!spec.simple()) {
    rep.delta_theta = std::numeric_limits<double>::quiet_NaN();
    rep.verdict = ImmersionVerdict::Exceptional;
    rep.approx.residual = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.delta_theta = delta_theta(spec);
  rep.approx = rational_angle(rep.delta_theta, m_max);
  rep.verdict = rep.approx.residual < rationality_tol ? ImmersionVerdict::ProperlyImmersed
                                                      : ImmersionVerdict::DenseInAnnulus;
  return rep;
}

}  // namespace helidrop

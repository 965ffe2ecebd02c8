#include "helidrop/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "helidrop/error.hpp"

namespace helidrop {

namespace {

using boost::math::quadrature::tanh_sinh;

tanh_sinh<double>& integrator(int max_refinements) {
  thread_local int cached_levels = -1;
  thread_local std::unique_ptr<tanh_sinh<double>> ts;
  if (!ts || cached_levels != max_refinements) {
    ts = std::make_unique<tanh_sinh<double>>(static_cast<std::size_t>(max_refinements));
    cached_levels = max_refinements;
  }
  return *ts;
}

template <class F>
double integrate(const F& f, double lo, double hi, const QuadratureConfig& cfg) {
  double err = 0.0, l1 = 0.0;
  const double v = integrator(cfg.max_refinements).integrate(f, lo, hi, cfg.rel_tol, &err, &l1);
  // A second pass with a tighter relative target when the absolute floor is
  // not met; tanh-sinh reuses its abscissae, so this is cheap.
  if (err > cfg.abs_tol && err > cfg.rel_tol * std::abs(v)) {
    return integrator(cfg.max_refinements).integrate(f, lo, hi, cfg.rel_tol * 1e-2);
  }
  return v;
}

// Quotient s(r) of p(r) = (r − lo)(hi − r)s(r).
Polynomial deflate(const Quartic& q, double lo, double hi) {
  const Polynomial s = q.poly().deflate(lo).deflate(hi);
  std::vector<double> c = s.coeffs();
  for (double& v : c) v = -v;
  return Polynomial(std::move(c));
}

double q_of(const Params& p, double r) { return 4.0 * p.c + r * (-4.0 * p.lambda0 + p.a * r); }

// q(r)/r, avoiding 0/0 at r = 0 when C = 0.
double q_over_r(const Params& p, double r) {
  const double tail = p.a * r - 4.0 * p.lambda0;
  return p.c == 0.0 ? tail : 4.0 * p.c / r + tail;
}

double length_weight(const Params& p, double r) {
  const double q = q_of(p, r);
  return std::sqrt(64.0 + q * q * p.omega * p.omega);
}

double angle_weight(const Params& p, double r) {
  return q_over_r(p, r) * std::sqrt(1.0 + r * p.omega * p.omega);
}

template <class W>
double substituted(const FundamentalPieceSpec& spec, const W& weight, const QuadratureConfig& cfg) {
  const Quartic q = build_quartic(spec.params);
  const Polynomial s = deflate(q, spec.r_lo, spec.r_hi);
  const double len = spec.r_hi - spec.r_lo;
  auto f = [&](double u) {
    const double su = std::sin(u);
    const double r = spec.r_lo + len * su * su;
    const double sv = s(r);
    if (!(sv > 0.0)) return 0.0;
    return 2.0 * weight(r) / std::sqrt(sv);
  };
  return integrate(f, 0.0, 0.5 * std::numbers::pi, cfg);
}

template <class W>
double direct(const FundamentalPieceSpec& spec, const W& weight, const QuadratureConfig& cfg) {
  const Quartic q = build_quartic(spec.params);
  auto f = [&](double r) {
    const double pv = q(r);
    if (!(pv > 0.0)) return 0.0;
    return weight(r) / std::sqrt(pv);
  };
  return integrate(f, spec.r_lo, spec.r_hi, cfg);
}

}  // namespace

FundamentalPieceSpec make_spec(const Params& p, const PositiveInterval& iv) {
  return FundamentalPieceSpec{p, iv.lo, iv.hi, iv.lo_mult, iv.hi_mult};
}

std::optional<double> arc_length(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg) {
  if (!spec.simple()) return std::nullopt;
  return substituted(spec, [&](double r) { return length_weight(spec.params, r); }, cfg);
}

double delta_theta(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg) {
  if (!spec.simple()) {
    throw DivergentAngle("endpoint of the fundamental piece is a multiple root; the winding is infinite");
  }
  return substituted(spec, [&](double r) { return angle_weight(spec.params, r); }, cfg);
}

double arc_length_direct(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg) {
  return direct(spec, [&](double r) { return length_weight(spec.params, r); }, cfg);
}

double delta_theta_direct(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg) {
  return direct(spec, [&](double r) { return angle_weight(spec.params, r); }, cfg);
}

double limit_lemma(const std::function<double(double)>& f_at, double r0, double A) {
  if (!(A > 0.0)) throw NonpositiveCurvatureA("limit lemma needs A > 0");
  return f_at(r0) * std::numbers::pi / std::sqrt(A);
}

double case_one_limit(double omega) {
  return -(2.0 * std::numbers::pi / std::sqrt(3.0)) * std::sqrt(1.0 + std::cbrt(4.0) * omega * omega);
}

double branch_limit(double a, double omega, int branch) {
  if (branch != 1 && branch != 2) throw ValidationError("branch limit is defined for branches 1 and 2");
  const Thresholds t = thresholds(a);
  const double ri = t.r(branch), ci = t.c(branch);
  const double A = 16.0 + 8.0 * a * (ci - 3.0 * ri) + 6.0 * a * a * ri * ri;
  auto f = [&](double r) {
    return (4.0 * ci + a * r * r - 4.0 * r) * std::sqrt(1.0 + r * omega * omega) / r;
  };
  return limit_lemma(f, ri, A);
}

double richardson_limit(const std::function<double(double)>& f, double eps) {
  const double f0 = f(eps), f1 = f(eps / 10.0), f2 = f(eps / 100.0);
  const double r0 = (10.0 * f1 - f0) / 9.0;
  const double r1 = (10.0 * f2 - f1) / 9.0;
  return (100.0 * r1 - r0) / 99.0;
}

namespace {

// Δθ̃ on the interval that opens around r_star at level c.
double angle_near(const Params& base, double c, double r_star, const QuadratureConfig& cfg) {
  const Params p = base.with_c(c);
  const RootStructure rs = isolate_roots(build_quartic(p), 1e-12);
  const PositiveInterval* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const PositiveInterval& iv : rs.intervals) {
    const double d = (r_star < iv.lo) ? iv.lo - r_star : (r_star > iv.hi ? r_star - iv.hi : 0.0);
    if (d < best_d) {
      best_d = d;
      best = &iv;
    }
  }
  if (!best) throw NoBracket("no positivity interval near the collapse point");
  return delta_theta(make_spec(p, *best), cfg);
}

}  // namespace

LimitCheck delta_theta_limit_check(const Params& p, int branch, const QuadratureConfig& cfg) {
  const Thresholds t = thresholds(p.a);
  const double ci = t.c(branch), ri = t.r(branch);
  // Side on which the interval around rᵢ exists: above C₁ for a < 0 and
  // above C₂; below C₁ for a > 0.
  const double side = (branch == 1 && p.a > 0.0) ? -1.0 : 1.0;
  LimitCheck out;
  out.closed_form = branch_limit(p.a, p.omega, branch);
  out.numeric_limit = richardson_limit(
      [&](double eps) { return angle_near(p, ci + side * eps, ri, cfg); }, 1e-2);
  out.gap = std::abs(out.numeric_limit - out.closed_form);
  return out;
}

LimitCheck case_one_limit_check(double omega, const QuadratureConfig& cfg) {
  const Params base = Params::case_one(omega, 0.0);
  const double c0 = case_one_c0();
  LimitCheck out;
  out.closed_form = case_one_limit(omega);
  out.numeric_limit = richardson_limit(
      [&](double eps) { return angle_near(base, c0 + eps, std::cbrt(4.0), cfg); }, 1e-2);
  out.gap = std::abs(out.numeric_limit - out.closed_form);
  return out;
}

}  // namespace helidrop

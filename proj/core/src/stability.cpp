#include "helidrop/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "helidrop/error.hpp"

namespace helidrop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE2 = std::numbers::e * std::numbers::e;

template <class Fn>
double trapezoid(const std::vector<LoopSample>& ls, Fn&& f) {
  double sum = 0.0;
  double prev = f(ls.front());
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const double cur = f(ls[i]);
    sum += 0.5 * (prev + cur) * (ls[i].s - ls[i - 1].s);
    prev = cur;
  }
  return sum;
}

LoopSample loop_sample(const Params& p, const ProfileSample& smp) {
  const TSPoint pt{smp.xi1, smp.xi2};
  const GeomSample g = curvatures(p, pt);
  LoopSample ls;
  ls.s = smp.s;
  ls.xi1 = smp.xi1;
  ls.xi2 = smp.xi2;
  ls.area_density = g.area_density;
  ls.r = pt.r();
  ls.dxi1 = rhs(p, pt).dxi1;
  ls.nu3 = g.nu3;
  ls.dnu3 = p.omega * ls.dxi1 / (g.area_density * g.area_density * g.area_density);
  ls.k = g.k;
  ls.potential = 4.0 * g.h * g.h - 2.0 * g.k + p.a * g.qhat;
  return ls;
}

std::vector<LoopSample> closed_loop(const Params& p, const ProfileCurve& piece) {
  if (piece.samples.size() < 3) throw EmptyProfile("loop integrals need at least three samples");
  const ProfileSample& a = piece.samples.front();
  const ProfileSample& b = piece.samples.back();
  const double scale = std::max(1.0, std::sqrt(a.xi1 * a.xi1 + a.xi2 * a.xi2));
  if (std::hypot(a.xi1 - b.xi1, a.xi2 - b.xi2) > 1e-6 * scale) {
    throw ValidationError("profile is not a closed loop of the TreadmillSled flow");
  }
  std::vector<LoopSample> out;
  out.reserve(piece.samples.size());
  for (const ProfileSample& smp : piece.samples) out.push_back(loop_sample(p, smp));
  return out;
}

std::pair<double, double> exp_nu3(const LoopSample& ls) {
  const double u = std::exp(ls.nu3);
  return {u, u * ls.dnu3};
}

}  // namespace

std::vector<LoopSample> loop_samples(const StabilityInput& in) {
  validate(in.params);
  if (!(in.h > 0.0) || !std::isfinite(in.h)) throw ValidationError("slab height h must be positive");
  return closed_loop(in.params, in.piece);
}

std::pair<double, double> k_integral(const ProfileCurve& piece) {
  const std::vector<LoopSample> ls = closed_loop(piece.params, piece);
  return {trapezoid(ls, [](const LoopSample& q) { return q.k * q.area_density; }),
          trapezoid(ls, [](const LoopSample& q) { return std::abs(q.k) * q.area_density; })};
}

Bound1 bound1_check(const StabilityInput& in) {
  const std::vector<LoopSample> ls = loop_samples(in);
  const double inv = trapezoid(ls, [](const LoopSample& q) { return 1.0 / q.area_density; });
  Bound1 b;
  b.lhs = 4.0 * kPi * kPi / (in.h * in.h) * inv;
  b.rhs = trapezoid(ls, [](const LoopSample& q) { return q.potential * q.area_density; });
  b.h_max = b.rhs > 0.0 ? 2.0 * kPi * std::sqrt(inv / b.rhs) : std::numeric_limits<double>::infinity();
  b.violated = b.lhs < b.rhs;
  return b;
}

namespace {

void require_not_round(const std::vector<LoopSample>& ls) {
  double mean = 0.0;
  for (const LoopSample& q : ls) mean += q.xi1;
  mean /= static_cast<double>(ls.size());
  double var = 0.0;
  for (const LoopSample& q : ls) var += (q.xi1 - mean) * (q.xi1 - mean);
  var /= static_cast<double>(ls.size());
  if (var <= 1e-12) throw RoundCylinderInput("the height bound from nu3 needs a loop that is not a round cylinder");
}

}  // namespace

BoundBB bb_height_bound(const StabilityInput& in) {
  const std::vector<LoopSample> ls = loop_samples(in);
  require_not_round(ls);
  const double w2 = in.params.omega * in.params.omega;
  const double num = trapezoid(ls, [&](const LoopSample& q) {
    return (1.0 + w2 * q.r) * q.dxi1 * q.dxi1 / std::pow(q.area_density, 7);
  });
  const double den = trapezoid(ls, [](const LoopSample& q) { return 1.0 / (q.area_density * q.area_density); });
  BoundBB b;
  b.lhs = 4.0 * kPi * kPi * kE2 * kE2 / (in.h * in.h);
  b.rhs = w2 * num / den;
  b.h_max = b.rhs > 0.0 ? 2.0 * kPi * kE2 / std::sqrt(b.rhs) : std::numeric_limits<double>::infinity();
  b.violated = b.lhs < b.rhs;
  return b;
}

double bb_rhs_alternate(const StabilityInput& in) {
  const std::vector<LoopSample> ls = loop_samples(in);
  require_not_round(ls);
  const double w2 = in.params.omega * in.params.omega;
  const double num = trapezoid(ls, [&](const LoopSample& q) {
    return (1.0 + w2 * q.r * q.dxi1 * q.dxi1) / std::pow(q.area_density, 7);
  });
  const double den = trapezoid(ls, [](const LoopSample& q) { return 1.0 / (q.area_density * q.area_density); });
  return w2 * num / den;
}

SecondVariation second_variation_separable(const StabilityInput& in,
                                           const std::function<std::pair<double, double>(const LoopSample&)>& u,
                                           double phase, int nt) {
  if (nt < 4) throw ValidationError("t quadrature needs at least 4 nodes");
  const std::vector<LoopSample> ls = loop_samples(in);
  const double h = in.h, k = 2.0 * kPi / h, w = h / nt;
  double ss = 0.0, sc = 0.0, cc = 0.0, s1 = 0.0;
  for (int j = 0; j < nt; ++j) {
    const double t = -0.5 * h + (j + 0.5) * w;
    const double sn = std::sin(k * t + phase), cs = std::cos(k * t + phase);
    ss += w * sn * sn;
    sc += w * sn * cs * k;
    cc += w * cs * cs * k * k;
    s1 += w * sn;
  }
  const double w2 = in.params.omega * in.params.omega;
  SecondVariation sv;
  sv.value = trapezoid(ls, [&](const LoopSample& q) {
    const auto [v, vs] = u(q);
    const double kinetic = ((1.0 + w2 * q.r) * vs * vs * ss - 2.0 * in.params.omega * q.xi2 * vs * v * sc +
                            v * v * cc) / q.area_density;
    return kinetic - q.potential * q.area_density * v * v * ss;
  });
  sv.cross_term = trapezoid(ls, [&](const LoopSample& q) {
    const auto [v, vs] = u(q);
    return -2.0 * in.params.omega * q.xi2 * vs * v * sc / q.area_density;
  });
  sv.mean = trapezoid(ls, [&](const LoopSample& q) { return u(q).first * q.area_density * s1; });
  return sv;
}

SecondVariation second_variation_separable(const StabilityInput& in, TestFunction u, double phase, int nt) {
  switch (u) {
    case TestFunction::Zero:
      return second_variation_separable(in, [](const LoopSample&) { return std::pair{0.0, 0.0}; }, phase, nt);
    case TestFunction::Unit:
      return second_variation_separable(in, [](const LoopSample&) { return std::pair{1.0, 0.0}; }, phase, nt);
    case TestFunction::ExpNu3:
      return second_variation_separable(in, exp_nu3, phase, nt);
  }
  throw ValidationError("unknown test function");
}

double bb_proof_expression(const StabilityInput& in) {
  const std::vector<LoopSample> ls = loop_samples(in);
  const double w2 = in.params.omega * in.params.omega;
  const double first = trapezoid(ls, [](const LoopSample& q) {
    return std::exp(2.0 * q.nu3) / (q.area_density * q.area_density);
  });
  const double second = trapezoid(ls, [&](const LoopSample& q) {
    return std::exp(2.0 * q.nu3) * (1.0 + w2 * q.r) * q.dnu3 * q.dnu3 / q.area_density;
  });
  return 2.0 * kPi * kPi / in.h * first - 0.5 * in.h * second;
}

double jacobi_residual(const StabilityInput& in) {
  const std::vector<LoopSample> ls = loop_samples(in);
  const double w2 = in.params.omega * in.params.omega;
  auto flux = [&](const LoopSample& q) { return (1.0 + w2 * q.r) / q.area_density * q.dnu3; };
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
    const double h0 = ls[i].s - ls[i - 1].s, h1 = ls[i + 1].s - ls[i].s;
    if (h0 <= 0.0 || h1 <= 0.0) continue;
    const double f0 = flux(ls[i - 1]), f1 = flux(ls[i]), f2 = flux(ls[i + 1]);
    const double d = (-h1 / (h0 * (h0 + h1))) * f0 + ((h1 - h0) / (h0 * h1)) * f1 + (h0 / (h1 * (h0 + h1))) * f2;
    const double pot = ls[i].potential * ls[i].area_density * ls[i].nu3;
    worst = std::max(worst, std::abs(d + pot));
    scale = std::max({scale, std::abs(d), std::abs(pot)});
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

StabilityReport stability_report(const StabilityInput& in, BoundSelection which, TestFunction test) {
  const std::vector<LoopSample> ls = loop_samples(in);
  StabilityReport rep;
  rep.test_function = test;
  rep.k_integral = trapezoid(ls, [](const LoopSample& q) { return q.k * q.area_density; });
  rep.k_abs_integral = trapezoid(ls, [](const LoopSample& q) { return std::abs(q.k) * q.area_density; });
  rep.area = in.h * trapezoid(ls, [](const LoopSample& q) { return q.area_density; });
  rep.potential_profile.reserve(ls.size());
  for (const LoopSample& q : ls) rep.potential_profile.emplace_back(q.s, q.potential);
  if (which != BoundSelection::BB) rep.bound1 = bound1_check(in);
  if (which == BoundSelection::BB) {
    rep.bb = bb_height_bound(in);
  } else if (which == BoundSelection::All) {
    try {
      rep.bb = bb_height_bound(in);
    } catch (const RoundCylinderInput&) {
      // no ν₃ test function on a round cylinder
    }
  }
  rep.second_var_value = second_variation_separable(in, test).value;
  return rep;
}

FluxIntegrals flux_integrals(const SurfacePatch& patch) {
  if (patch.quads.empty()) throw DegenerateMesh("patch has no faces");
  FluxIntegrals f;
  auto triangle = [&](std::size_t ia, std::size_t ib, std::size_t ic) {
    const Vec3& a = patch.vertices[ia];
    const Vec3& b = patch.vertices[ib];
    const Vec3& c = patch.vertices[ic];
    const Vec3 area = (b - a).cross(c - a) * 0.5;
    const double mag = area.norm();
    if (!(mag > 0.0)) throw DegenerateMesh("zero-area face in patch");
    const Vec3 m = (a + b + c) * (1.0 / 3.0);
    const Vec3 radial{m.x, m.y, 0.0};
    const double flux = radial.dot(area);
    f.volume += 0.5 * flux;
    f.r2_moment += 0.25 * (m.x * m.x + m.y * m.y) * flux;
    f.area += mag;
  };
  for (const auto& q : patch.quads) {
    triangle(q[0], q[1], q[2]);
    triangle(q[0], q[2], q[3]);
  }
  f.energy = f.area - 0.5 * patch.params.a * f.r2_moment + patch.params.lambda0 * f.volume;
  return f;
}

}  // namespace helidrop

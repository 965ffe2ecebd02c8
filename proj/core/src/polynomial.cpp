#include "helidrop/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "helidrop/error.hpp"

namespace helidrop {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Candidate {
  double x;
  int mult;
};

// Exact-zero multiplicity at x: number of leading derivatives that vanish.
int exact_zero_multiplicity(const Polynomial& p, double x) {
  int m = 0;
  Polynomial d = p;
  while (d.degree() >= 0 && d(x) == 0.0) {
    ++m;
    if (d.degree() == 0) break;
    d = d.derivative();
  }
  return m;
}

// A critical point x of p is a multiple root when |p(x)| is below either the
// rounding floor or the depth a parabola of curvature p''(x) would need to
// open a gap wider than mult_tol.
bool is_touch(const Polynomial& p, const Polynomial& p2, double x, double mult_tol) {
  const double floor_tol = 32.0 * kEps * p.term_scale(x);
  const double half_gap = 0.5 * mult_tol;
  const double gap_tol = p2.degree() >= 0 ? 0.5 * std::abs(p2(x)) * half_gap * half_gap : 0.0;
  return std::abs(p(x)) <= std::max(floor_tol, gap_tol);
}

double bisect_root(const Polynomial& p, double a, double b, double fa) {
  for (int it = 0; it < 300; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = p(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::vector<Candidate> cluster(std::vector<Candidate> cands, double mult_tol) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& l, const Candidate& r) { return l.x < r.x; });
  std::vector<Candidate> out;
  for (const Candidate& c : cands) {
    if (!out.empty() && c.x - out.back().x <= mult_tol) {
      Candidate& last = out.back();
      if (c.mult > last.mult) last.x = c.x;
      last.mult += c.mult;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Roots of p in [lo, hi], ascending, with multiplicities.
std::vector<Candidate> roots_in(const Polynomial& p, double lo, double hi, double mult_tol) {
  const int deg = p.degree();
  if (deg <= 0) return {};
  if (deg == 1) {
    const double x = -p.coeffs()[0] / p.coeffs()[1];
    if (x >= lo && x <= hi) return {{x, 1}};
    return {};
  }

  const Polynomial dp = p.derivative();
  const Polynomial ddp = dp.derivative();
  const std::vector<Candidate> crit = roots_in(dp, lo, hi, mult_tol);

  std::vector<Candidate> found;
  std::vector<double> knots{lo};
  std::vector<bool> knot_is_root{false};

  const int lo_mult = exact_zero_multiplicity(p, lo);
  if (lo_mult > 0) {
    found.push_back({lo, lo_mult});
    knot_is_root[0] = true;
  }
  for (const Candidate& c : crit) {
    if (c.x <= lo || c.x >= hi) continue;
    const bool touch = is_touch(p, ddp, c.x, mult_tol);
    if (touch) found.push_back({c.x, c.mult + 1});
    knots.push_back(c.x);
    knot_is_root.push_back(touch);
  }
  knots.push_back(hi);
  knot_is_root.push_back(p(hi) == 0.0);
  if (knot_is_root.back()) found.push_back({hi, 1});

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (knot_is_root[k] || knot_is_root[k + 1]) continue;
    const double a = knots[k], b = knots[k + 1];
    if (!(b > a)) continue;
    const double fa = p(a), fb = p(b);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      found.push_back({bisect_root(p, a, b, fa), 1});
    }
  }
  return cluster(std::move(found), mult_tol);
}

double cauchy_bound(const Polynomial& p) {
  const auto& c = p.coeffs();
  const double lead = std::abs(c.back());
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i]) / lead);
  return 1.0 + m;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double r) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + *it;
  return acc;
}

double Polynomial::term_scale(double r) const {
  const double ar = std::abs(r);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * ar + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<double> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(static_cast<double>(i) * coeffs_[i]);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::deflate(double root, int times) const {
  std::vector<double> c = coeffs_;
  for (int t = 0; t < times && c.size() > 1; ++t) {
    std::vector<double> out(c.size() - 1);
    double carry = 0.0;
    for (std::size_t i = c.size() - 1; i >= 1; --i) {
      carry = c[i] + carry * root;
      out[i - 1] = carry;
    }
    c = std::move(out);
  }
  return Polynomial(std::move(c));
}

double Quartic::operator()(double r) const {
  return (((c[4] * r + c[3]) * r + c[2]) * r + c[1]) * r + c[0];
}

Polynomial Quartic::poly() const { return Polynomial({c.begin(), c.end()}); }

Quartic build_quartic(const Params& p) {
  const double a = p.a, L = p.lambda0, C = p.c;
  return Quartic{{-16.0 * C * C, 64.0 + 32.0 * C * L, -16.0 * L * L - 8.0 * a * C, 8.0 * a * L,
                  -a * a}};
}

RootStructure isolate_roots(const Polynomial& p, double mult_tol) {
  if (!(mult_tol > 0.0)) throw ValidationError("mult_tol must be positive");
  bool all_tiny = true;
  for (double c : p.coeffs()) all_tiny = all_tiny && std::abs(c) < 1e-300;
  if (all_tiny) throw DegenerateQuartic("all polynomial coefficients vanish");

  RootStructure rs;
  if (p.degree() <= 0) return rs;

  const double hi = cauchy_bound(p);
  for (const Candidate& c : roots_in(p, 0.0, hi, mult_tol)) rs.roots.push_back({c.x, c.mult});

  for (std::size_t i = 0; i + 1 < rs.roots.size(); ++i) {
    const Root& l = rs.roots[i];
    const Root& h = rs.roots[i + 1];
    if (p(0.5 * (l.r + h.r)) > 0.0) rs.intervals.push_back({l.r, h.r, l.multiplicity, h.multiplicity});
  }
  return rs;
}

RootStructure isolate_roots(const Quartic& q, double mult_tol) { return isolate_roots(q.poly(), mult_tol); }

double threshold_h(double R) { return 2.0 * (R - 1.0) / (R * R * R); }

double threshold_c(double a, double r) {
  return (16.0 - 8.0 * r + 6.0 * a * r * r - a * a * r * r * r) / (4.0 * (-2.0 + a * r));
}

namespace {

double solve_h(double a, double lo, double hi) {
  auto f = [a](double R) { return threshold_h(R) - a; };
  boost::uintmax_t iters = 200;
  const auto [l, h] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (l + h);
}

bool is_special_a(double a) { return std::abs(a - kSpecialA) <= 1e-14; }

}  // namespace

bool Thresholds::has_branch(int branch) const {
  if (branch == 1) return true;
  if (branch == 2) return r2.has_value();
  if (branch == 3) return r3.has_value();
  return false;
}

double Thresholds::r(int branch) const {
  if (!has_branch(branch)) {
    std::ostringstream os;
    os << "threshold branch " << branch << " undefined for a=" << a << " (requires 0<a<=8/27)";
    throw BranchUndefined(os.str());
  }
  return branch == 1 ? r1 : (branch == 2 ? *r2 : *r3);
}

double Thresholds::R(int branch) const {
  (void)r(branch);
  return branch == 1 ? R1 : (branch == 2 ? *R2 : *R3);
}

double Thresholds::c(int branch) const {
  (void)r(branch);
  return branch == 1 ? c1 : (branch == 2 ? *c2 : *c3);
}

Thresholds thresholds(double a) {
  if (a == 0.0 || !std::isfinite(a)) throw ValidationError("thresholds require a finite a != 0");
  Thresholds t;
  t.a = a;

  if (a < 0.0) {
    double lo = 0.5;
    while (threshold_h(lo) >= a) lo *= 0.5;
    t.R1 = (threshold_h(lo) == a) ? lo : solve_h(a, lo, 1.0);
  } else {
    double hi = -0.5;
    while (threshold_h(hi) <= a) hi *= 0.5;
    double lo = -2.0;
    while (threshold_h(lo) >= a) lo *= 2.0;
    t.R1 = solve_h(a, lo, hi);
  }
  t.r1 = t.R1 * t.R1;
  t.c1 = threshold_c(a, t.r1);

  if (is_special_a(a)) {
    t.R2 = t.R3 = 1.5;
  } else if (a > 0.0 && a < kSpecialA) {
    t.R2 = solve_h(a, 1.0, 1.5);
    double hi = 3.0;
    while (threshold_h(hi) >= a) hi *= 2.0;
    t.R3 = solve_h(a, 1.5, hi);
  }
  if (t.R2) {
    t.r2 = *t.R2 * *t.R2;
    t.r3 = *t.R3 * *t.R3;
    t.c2 = threshold_c(a, *t.r2);
    t.c3 = threshold_c(a, *t.r3);
  }
  return t;
}

RootCountRow root_count_table(double a, double c, double boundary_tol) {
  const Thresholds t = thresholds(a);
  auto near = [&](double ci) { return std::abs(c - ci) < boundary_tol; };

  if (a < 0.0) {
    if (near(t.c1)) return {1, true, "C=C1"};
    if (c < t.c1) return {0, false, "C<C1"};
    return {2, false, "C>C1"};
  }
  if (is_special_a(a)) {
    if (near(-9.0 / 8.0)) return {2, true, "C=-9/8"};
    if (near(9.0)) return {1, true, "C=C1"};
    if (c > 9.0) return {0, false, "C>C1"};
    return {2, false, c < -9.0 / 8.0 ? "C<-9/8" : "-9/8<C<C1"};
  }
  if (a < kSpecialA) {
    const double c2 = *t.c2, c3 = *t.c3;
    if (near(t.c1)) return {1, true, "C=C1"};
    if (near(c3)) return {3, true, "C=C3"};
    if (near(c2)) return {3, true, "C=C2"};
    if (c > t.c1) return {0, false, "C>C1"};
    if (c > c3) return {2, false, "C3<C<C1"};
    if (c > c2) return {4, false, "C2<C<C3"};
    return {2, false, "C<C2"};
  }
  if (near(t.c1)) return {1, true, "C=C1"};
  if (c > t.c1) return {0, false, "C>C1"};
  return {2, false, "C<C1"};
}

}  // namespace helidrop

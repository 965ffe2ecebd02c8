#include "helidrop/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "helidrop/error.hpp"
#include "helidrop/parallel.hpp"

namespace helidrop {

namespace {

bool at_special_a(double a) { return std::abs(a - kSpecialA) <= 1e-14; }

void require_normalized(const Params& p) {
  validate(p);
  if (normalized_case(p) == Case::General) {
    throw ValidationError("classification needs Case I (lambda0=0, a=-1) or Case II (lambda0=1)");
  }
}

// Δθ̃ on the lowest positivity interval, or the marker explaining its absence.
GridEntry lowest_interval_angle(const Params& p, const QuadratureConfig& cfg) {
  GridEntry e;
  e.c = p.c;
  const RootStructure rs = isolate_roots(build_quartic(p));
  if (rs.intervals.empty()) {
    e.marker = GridMarker::OutOfDomain;
    return e;
  }
  const PositiveInterval& iv = rs.intervals.front();
  if (iv.lo_mult > 1 || iv.hi_mult > 1) {
    e.marker = GridMarker::Asymptote;
  } else if (iv.lo <= 0.0) {
    e.marker = GridMarker::Jump;
  } else {
    e.delta_theta = delta_theta(make_spec(p, iv), cfg);
  }
  return e;
}

GridEntry grid_entry(const Params& base, double c, double tol, const QuadratureConfig& cfg) {
  const Params p = base.with_c(c);
  auto near = [&](double v) { return std::abs(c - v) <= tol; };
  auto limit = [&](double value) {
    GridEntry e;
    e.c = c;
    e.marker = GridMarker::Limit;
    e.delta_theta = value;
    return e;
  };
  auto marked = [&](GridMarker m) {
    GridEntry e;
    e.c = c;
    e.marker = m;
    return e;
  };

  if (normalized_case(p) == Case::I) {
    const double c0 = case_one_c0();
    if (near(c0)) return limit(case_one_limit(p.omega));
    if (c < c0) return marked(GridMarker::OutOfDomain);
  } else if (p.a != 0.0) {
    const Thresholds t = thresholds(p.a);
    if (p.a < 0.0) {
      if (near(t.c1)) return limit(branch_limit(p.a, p.omega, 1));
      if (c < t.c1) return marked(GridMarker::OutOfDomain);
    } else if (at_special_a(p.a)) {
      if (near(t.c1)) return limit(branch_limit(p.a, p.omega, 1));
      if (c > t.c1) return marked(GridMarker::OutOfDomain);
      if (near(*t.c2)) return marked(GridMarker::Asymptote);
    } else if (p.a < kSpecialA) {
      if (near(t.c1)) return limit(branch_limit(p.a, p.omega, 1));
      if (near(*t.c2)) return limit(branch_limit(p.a, p.omega, 2));
      if (near(*t.c3)) return marked(GridMarker::Asymptote);
      if (c > t.c1 || c < *t.c2) return marked(GridMarker::OutOfDomain);
    } else {
      if (near(t.c1)) return limit(branch_limit(p.a, p.omega, 1));
      if (c > t.c1) return marked(GridMarker::OutOfDomain);
    }
  }
  if (near(0.0)) return marked(GridMarker::Jump);
  GridEntry e = lowest_interval_angle(p, cfg);
  e.c = c;
  return e;
}

int component_of(const std::vector<double>& breaks, double c) {
  return static_cast<int>(std::count_if(breaks.begin(), breaks.end(), [&](double b) { return b < c; }));
}

}  // namespace

std::vector<SurfaceDescriptor> surface_inventory(const Params& p, double mult_tol) {
  const RootStructure rs = isolate_roots(build_quartic(p), mult_tol);
  std::vector<SurfaceDescriptor> out;
  for (const Root& root : rs.roots) {
    if (root.multiplicity >= 2 && root.r > 0.0) {
      SurfaceDescriptor d;
      d.kind = SurfaceKind::Cylinder;
      d.r_lo = d.r_hi = root.r;
      d.radius = std::sqrt(root.r);
      d.orientation = cylinder_orientation(p, root.r);
      out.push_back(d);
    }
  }
  for (const PositiveInterval& iv : rs.intervals) {
    SurfaceDescriptor d;
    d.r_lo = iv.lo;
    d.r_hi = iv.hi;
    if (iv.lo_mult > 1 || iv.hi_mult > 1) {
      d.kind = SurfaceKind::Exceptional;
      d.radius = std::sqrt(iv.lo_mult > 1 ? iv.lo : iv.hi);
    }
    out.push_back(d);
  }
  std::stable_sort(out.begin(), out.end(), [](const SurfaceDescriptor& l, const SurfaceDescriptor& r) {
    return l.r_lo < r.r_lo;
  });
  return out;
}

ModuliVerdict classify(const Params& p, double boundary_tol) {
  require_normalized(p);
  ModuliVerdict v;
  v.params = p;
  const double c = p.c;
  auto snap = [&](double target) {
    if (std::abs(c - target) < boundary_tol) {
      v.params.c = target;
      v.snapped = c != target;
      return true;
    }
    return false;
  };

  if (normalized_case(p) == Case::I) {
    const double c0 = case_one_c0();
    if (snap(c0)) {
      v.region = Region::CaseICylinder;
    } else {
      v.region = c < c0 ? Region::Empty : Region::CaseIRegular;
    }
  } else if (p.a == 0.0) {
    v.region = Region::Cmc;
  } else {
    const Thresholds t = thresholds(p.a);
    if (p.a < 0.0) {
      if (snap(t.c1)) {
        v.region = Region::Beta1;
      } else {
        v.region = c < t.c1 ? Region::Empty : Region::Omega1;
      }
    } else if (at_special_a(p.a)) {
      if (snap(t.c1)) {
        v.region = Region::Beta1;
      } else if (snap(*t.c2)) {
        v.region = Region::SpecialPoint827;
      } else {
        v.region = c > t.c1 ? Region::Empty : Region::Omega3;
      }
    } else if (p.a < kSpecialA) {
      if (snap(t.c1)) {
        v.region = Region::Beta1;
      } else if (snap(*t.c3)) {
        v.region = Region::Beta3;
      } else if (snap(*t.c2)) {
        v.region = Region::Beta2;
      } else if (c > t.c1) {
        v.region = Region::Empty;
      } else if (c > *t.c2 && c < *t.c3) {
        v.region = Region::Omega2;
      } else {
        v.region = Region::Omega3;
      }
    } else {
      if (snap(t.c1)) {
        v.region = Region::Beta1;
      } else {
        v.region = c > t.c1 ? Region::Empty : Region::Omega3;
      }
    }
  }

  v.roots = isolate_roots(build_quartic(v.params));
  v.surfaces = surface_inventory(v.params);
  if (v.region == Region::Cmc && v.surfaces.empty()) v.region = Region::Empty;
  return v;
}

Params flip_orientation(const Params& p) {
  Params f = p;
  f.a = -p.a;
  f.lambda0 = -p.lambda0;
  f.c = -p.c;
  return f;
}

std::vector<double> structural_values(const Params& p) {
  require_normalized(p);
  std::vector<double> out{0.0};
  if (normalized_case(p) == Case::II && p.a > 0.0 && p.a <= kSpecialA + 1e-14) {
    const Thresholds t = thresholds(p.a);
    out.push_back(*t.c2);
    if (!at_special_a(p.a)) out.push_back(*t.c3);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<double, double> default_scan_range(const Params& p, double span) {
  require_normalized(p);
  if (normalized_case(p) == Case::I) {
    const double c0 = case_one_c0();
    return {c0, c0 + span};
  }
  if (p.a == 0.0) return {-span, span};
  const Thresholds t = thresholds(p.a);
  if (p.a < 0.0) return {t.c1, t.c1 + span};
  if (p.a < kSpecialA && !at_special_a(p.a)) return {*t.c2, t.c1};
  return {t.c1 - span, t.c1};
}

std::vector<GridEntry> delta_theta_profile(const Params& base, const std::vector<double>& c_grid, int threads,
                                           double feature_tol) {
  if (c_grid.empty()) return {};
  require_normalized(base.with_c(c_grid.front()));
  const std::vector<double> breaks = structural_values(base);
  std::vector<GridEntry> out(c_grid.size());
  const QuadratureConfig cfg;
  parallel_for(
      c_grid.size(),
      [&](std::size_t i) {
        out[i] = grid_entry(base, c_grid[i], feature_tol, cfg);
        out[i].component = component_of(breaks, c_grid[i]);
      },
      threads);
  return out;
}

SearchResult solve_for_angle(const Params& base, double target, const SearchOptions& opt) {
  require_normalized(base);
  if (opt.grid_per_component < 2) throw ValidationError("grid_per_component must be >= 2");
  const auto [lo, hi] = opt.range.value_or(default_scan_range(base));
  if (!(hi > lo)) throw ValidationError("scan range must have hi > lo");

  std::vector<double> cuts{lo};
  for (double b : structural_values(base)) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);

  // Chebyshev nodes per component, clustered toward the structural ends.
  const int n = opt.grid_per_component;
  std::vector<double> nodes;
  std::vector<int> comp;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]), half = 0.5 * (cuts[k + 1] - cuts[k]);
    for (int j = 0; j < n; ++j) {
      nodes.push_back(mid - half * std::cos(std::numbers::pi * (j + 0.5) / n));
      comp.push_back(static_cast<int>(k));
    }
  }
  std::vector<double> f(nodes.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(
      nodes.size(),
      [&](std::size_t i) {
        const GridEntry e = grid_entry(base, nodes[i], 1e-9, opt.quad);
        if (e.marker == GridMarker::None && e.delta_theta) f[i] = *e.delta_theta - target;
      },
      opt.threads);

  auto angle_at = [&](double c) {
    const GridEntry e = lowest_interval_angle(base.with_c(c), opt.quad);
    if (!e.delta_theta) throw NoBracket("Δθ̃ undefined inside a continuity component");
    return *e.delta_theta - target;
  };

  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (comp[i] != comp[i + 1] || !std::isfinite(f[i]) || !std::isfinite(f[i + 1])) continue;
    double c_star;
    if (f[i] == 0.0) {
      c_star = nodes[i];
    } else if ((f[i] < 0.0) != (f[i + 1] < 0.0)) {
      boost::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(angle_at, nodes[i], nodes[i + 1], f[i], f[i + 1],
                                                            boost::math::tools::eps_tolerance<double>(50), iters);
      c_star = 0.5 * (a + b);
    } else {
      continue;
    }
    SearchResult res;
    res.target = target;
    res.c_solution = c_star;
    res.bracket = {nodes[i], nodes[i + 1]};
    const Params ps = base.with_c(c_star);
    const RootStructure rs = isolate_roots(build_quartic(ps));
    res.piece = make_spec(ps, rs.intervals.front());
    res.residual = std::abs(delta_theta(res.piece, opt.quad) - target);
    if (res.residual >= opt.search_tol) {
      throw NoBracket("refinement stalled above search_tol near C=" + std::to_string(c_star));
    }
    return res;
  }
  throw NoBracket("no sign change of delta_theta - target in any continuity component of [" +
                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

SearchResult solve_for_rational(const Params& base, long n, long m, const SearchOptions& opt) {
  if (m < 1) throw ValidationError("m must be >= 1");
  SearchResult r = solve_for_angle(base, 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(m), opt);
  r.n = n;
  r.m = m;
  return r;
}

namespace {

struct Pt {
  double x, y;
};

double orient(Pt a, Pt b, Pt c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

bool opposite(double u, double v) { return (u > 0.0 && v < 0.0) || (u < 0.0 && v > 0.0); }

}  // namespace

EmbeddingReport embedding_precheck(const ProfileCurve& profile, double closure_tol) {
  if (profile.samples.size() < 2) throw EmptyProfile("embedding check needs at least two samples");
  std::vector<Pt> pts;
  pts.reserve(profile.samples.size());
  double scale = 0.0;
  for (const ProfileSample& s : profile.samples) {
    pts.push_back({s.x, s.y});
    scale = std::max(scale, std::hypot(s.x, s.y));
  }
  const bool closed = closure_gap(profile) <= closure_tol * std::max(1.0, scale) && pts.size() > 3;
  if (closed) pts.pop_back();
  const std::size_t np = pts.size();
  const std::size_t nseg = closed ? np : np - 1;

  struct Seg {
    std::size_t i;
    double x0, x1, y0, y1;
  };
  std::vector<Seg> segs(nseg);
  for (std::size_t i = 0; i < nseg; ++i) {
    const Pt a = pts[i], b = pts[(i + 1) % np];
    segs[i] = {i, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
  }
  std::vector<Seg> order = segs;
  std::sort(order.begin(), order.end(), [](const Seg& l, const Seg& r) { return l.x0 < r.x0; });

  auto adjacent = [&](std::size_t i, std::size_t j) {
    const std::size_t d = i > j ? i - j : j - i;
    return d <= 1 || (closed && d == nseg - 1);
  };

  EmbeddingReport rep;
  rep.segments = nseg;
  std::vector<Seg> active;
  for (const Seg& s : order) {
    active.erase(std::remove_if(active.begin(), active.end(), [&](const Seg& a) { return a.x1 < s.x0; }),
                 active.end());
    for (const Seg& a : active) {
      if (adjacent(a.i, s.i) || a.y1 < s.y0 || s.y1 < a.y0) continue;
      const Pt p1 = pts[a.i], p2 = pts[(a.i + 1) % np], q1 = pts[s.i], q2 = pts[(s.i + 1) % np];
      const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
      const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
      if (opposite(d1, d2) && opposite(d3, d4)) {
        const double t = d1 / (d1 - d2);
        rep.verdict = EmbeddingVerdict::SelfIntersecting;
        rep.crossing = std::make_pair(p1.x + t * (p2.x - p1.x), p1.y + t * (p2.y - p1.y));
        return rep;
      }
    }
    active.push_back(s);
  }
  return rep;
}

EmbeddingReport embedding_precheck(const SearchResult& result, int samples_per_piece) {
  if (result.m < 1) throw ValidationError("embedding check needs a rational target 2πn/m");
  PieceOptions opt;
  opt.samples = samples_per_piece;
  const ProfileCurve piece = integrate_piece(result.piece, opt);
  return embedding_precheck(assemble_profile(piece, static_cast<int>(result.m)));
}

}  // namespace helidrop

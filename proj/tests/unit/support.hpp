#pragma once

#include <cmath>

#include "helidrop/polynomial.hpp"
#include "helidrop/profile.hpp"
#include "helidrop/quadrature.hpp"

namespace helidrop::testing {

inline double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

// Spec of the lowest positivity interval at p.
inline FundamentalPieceSpec lowest_spec(const Params& p) {
  const RootStructure rs = isolate_roots(build_quartic(p));
  return make_spec(p, rs.intervals.at(0));
}

inline ProfileCurve lowest_piece(const Params& p, int samples = 2048) {
  PieceOptions opt;
  opt.samples = samples;
  return integrate_piece(lowest_spec(p), opt);
}

}  // namespace helidrop::testing

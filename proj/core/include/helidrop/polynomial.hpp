#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "helidrop/geometry.hpp"

namespace helidrop {

/// Dense real polynomial, coefficient i multiplies rⁱ.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double r) const;
  /// Σ|cᵢ||r|ⁱ, the magnitude scale of the terms at r (rounding-error yardstick).
  double term_scale(double r) const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Polynomial derivative() const;
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Quotient of p by (r − root)^times, remainder discarded.
  Polynomial deflate(double root, int times = 1) const;

 private:
  std::vector<double> coeffs_;  // trimmed: leading coefficient nonzero
};

/// p(r) = −16C² + (64 + 32CΛ₀)r − (16Λ₀² + 8aC)r² + 8aΛ₀r³ − a²r⁴.
struct Quartic {
  std::array<double, 5> c{};

  double operator()(double r) const;
  Polynomial poly() const;
};

Quartic build_quartic(const Params& p);

struct Root {
  double r = 0.0;
  int multiplicity = 1;
};

/// Maximal open interval where p > 0, bounded by two consecutive roots.
struct PositiveInterval {
  double lo = 0.0;
  double hi = 0.0;
  int lo_mult = 1;
  int hi_mult = 1;
};

struct RootStructure {
  std::vector<Root> roots;                  ///< nonnegative, ascending
  std::vector<PositiveInterval> intervals;  ///< ascending

  int distinct() const { return static_cast<int>(roots.size()); }
};

/// Default clustering tolerance in r for multiplicity detection.
inline constexpr double kDefaultMultTol = 1e-7;

/// All nonnegative real roots of `q` with multiplicities, plus the
/// positivity intervals. Roots are isolated by recursive subdivision at the
/// critical points of each derivative; a critical point where |p| is below
/// the resolution implied by `mult_tol` is a multiple root, and its location
/// is the (simple) root of the corresponding derivative.
RootStructure isolate_roots(const Quartic& q, double mult_tol = kDefaultMultTol);
RootStructure isolate_roots(const Polynomial& p, double mult_tol = kDefaultMultTol);

/// h(R) = 2(R − 1)/R³; its level sets define the branch radii Rᵢ(a).
double threshold_h(double R);

/// C(r) = (16 − 8r + 6ar² − a²r³)/(4(−2 + ar)).
double threshold_c(double a, double r);

/// Case-II thresholds. Branch 1 is defined for every a ≠ 0; branches 2 and 3
/// only for 0 < a ≤ 8/27.
struct Thresholds {
  double a = 0.0;
  double R1 = 0.0, r1 = 0.0, c1 = 0.0;
  std::optional<double> R2, r2, c2;
  std::optional<double> R3, r3, c3;

  /// rᵢ for branch i ∈ {1,2,3}; throws BranchUndefined when absent.
  double r(int branch) const;
  double c(int branch) const;
  double R(int branch) const;
  bool has_branch(int branch) const;
};

Thresholds thresholds(double a);

/// The special parameter a = 8/27 where branches 2 and 3 meet at R = 3/2.
inline constexpr double kSpecialA = 8.0 / 27.0;

/// One row of the Case-II root table.
struct RootCountRow {
  int distinct_roots = 0;
  bool boundary = false;  ///< C sits on one of the threshold curves
  std::string label;      ///< e.g. "C2<C<C3"
};

/// Predicted number of distinct nonnegative roots for Case II (Λ₀ = 1).
/// |c − Cᵢ| < boundary_tol reports the boundary row.
RootCountRow root_count_table(double a, double c, double boundary_tol = 1e-9);

}  // namespace helidrop

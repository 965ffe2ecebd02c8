#pragma once

#include <functional>
#include <optional>

#include "helidrop/geometry.hpp"
#include "helidrop/polynomial.hpp"

namespace helidrop {

/// One closed level curve of G: the r-interval between two consecutive roots
/// of p together with the endpoint multiplicities.
struct FundamentalPieceSpec {
  Params params;
  double r_lo = 0.0;
  double r_hi = 0.0;
  int m_lo = 1;
  int m_hi = 1;

  bool simple() const { return m_lo == 1 && m_hi == 1; }
};

FundamentalPieceSpec make_spec(const Params& p, const PositiveInterval& iv);

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_refinements = 15;
};

/// Length of the full closed level curve, ∫ √(64 + q²ω²)/√p dr over
/// [r_lo, r_hi] with q = 4C + r(−4Λ₀ + ar). nullopt when an endpoint is a
/// multiple root (the exceptional, divergent case).
std::optional<double> arc_length(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg = {});

/// Turning angle Δθ̃ = ∫ (4C + ar² − 4Λ₀r)√(1+rω²)/(r√p) dr over [r_lo, r_hi].
/// Throws DivergentAngle when an endpoint is a multiple root.
double delta_theta(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg = {});

/// Same integrals without the sin² substitution: tanh-sinh straight on the
/// r-integrand, an independent check of the substituted route.
double arc_length_direct(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg = {});
double delta_theta_direct(const FundamentalPieceSpec& spec, const QuadratureConfig& cfg = {});

/// lim ∫ f/√g over an interval collapsing onto r0, where g has a maximum of
/// curvature −2A there: f(r0)·π/√A. Throws NonpositiveCurvatureA if A ≤ 0.
double limit_lemma(const std::function<double(double)>& f_at, double r0, double A);

/// B(ω) = −(2π/√3)√(1 + ∛4 ω²), the Case-I limit of Δθ̃ as C → C₀⁺.
double case_one_limit(double omega);

/// bᵢ(a, ω), the Case-II limit of Δθ̃ as C approaches Cᵢ(a) from the side
/// where the interval around rᵢ opens. Branch 1 or 2.
double branch_limit(double a, double omega, int branch);

struct LimitCheck {
  double numeric_limit = 0.0;
  double closed_form = 0.0;
  double gap = 0.0;
};

/// Δθ̃ at C = Cᵢ ± ε for ε ∈ {1e−2, 1e−3, 1e−4}, two-level Richardson
/// extrapolated to ε → 0 and compared with bᵢ.
LimitCheck delta_theta_limit_check(const Params& p, int branch, const QuadratureConfig& cfg = {});

/// Case I analogue: C → C₀⁺ against B(ω). Accepts ω = 0.
LimitCheck case_one_limit_check(double omega, const QuadratureConfig& cfg = {});

/// Richardson extrapolation of f(ε) → f(0) from ε, ε/10, ε/100 assuming an
/// expansion in integer powers of ε.
double richardson_limit(const std::function<double(double)>& f, double eps);

}  // namespace helidrop

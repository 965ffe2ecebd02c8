#pragma once

#include <optional>
#include <vector>

#include "helidrop/geometry.hpp"
#include "helidrop/integrator.hpp"
#include "helidrop/quadrature.hpp"

namespace helidrop {

/// A point of the phase flow together with its arc length.
struct TSState {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double theta = 0.0;
  double s = 0.0;
};

struct ProfileSample {
  double s = 0.0;
  double x = 0.0;
  double y = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double theta = 0.0;
  double theta_tilde = 0.0;

  TSState ts() const { return {xi1, xi2, theta, s}; }
  double r() const { return x * x + y * y; }
};

struct ProfileCurve {
  Params params;
  std::vector<ProfileSample> samples;
  int piece_count = 1;
  double group_angle = 0.0;   ///< Δθ̃ of one fundamental piece
  double piece_length = 0.0;  ///< arc length of one fundamental piece
  double r_lo = 0.0;
  double r_hi = 0.0;
  IntegrationStats stats;
  double ts_closure = 0.0;  ///< |ξ(end) − ξ(start)| of the traced loop
};

/// (x, y) of a profile point from its TreadmillSled data:
/// x = ξ₁cosθ + ξ₂sinθ, y = ξ₁sinθ − ξ₂cosθ.
ProfileSample make_sample(double s, const OdeState& y);

struct TsDerivative {
  double dxi1 = 0.0;
  double dxi2 = 0.0;
  double dtheta = 0.0;
};

/// ξ₁′ = 1 − ξ₂θ′, ξ₂′ = ξ₁θ′ with θ′ the profile curvature.
TsDerivative rhs(const Params& p, TSPoint pt);

/// The ξ₁ ≥ 0 half of the level curve G = C at squared radius r:
///   ξ₁ = √p/√(64+q²ω²),  ξ₂ = q√(1+rω²)/√(64+q²ω²),  q = 4C + r(−4Λ₀ + ar).
TSPoint rho(const Params& p, double r);

/// n samples of ρ over [r_lo, r_hi] (endpoints included, clustered toward
/// them) followed by the ξ₁ → −ξ₁ mirror, giving the closed level curve.
/// A collapsed interval yields the single point ρ(r_lo).
std::vector<TSPoint> trace_level_set(const Params& p, double r_lo, double r_hi, int n);

struct PieceOptions {
  StepControl ctrl;
  int samples = 2048;  ///< uniform-in-s output samples per piece
};

/// Integrates one full loop of the level curve, starting at ξ₁ = 0, r = r_lo
/// with (x, y) = (√r_lo, 0), and stopping where the phase point returns to
/// the start.
ProfileCurve integrate_piece(const FundamentalPieceSpec& spec, const PieceOptions& opt = {});

/// k copies of a piece, copy j rotated by j·Δθ̃ about the origin.
ProfileCurve assemble_profile(const ProfileCurve& piece, int k);

/// Distance between the first and last (x, y).
double closure_gap(const ProfileCurve& curve);

enum class ExceptionalSide { Inner, Outer };

struct SpiralDiagnostics {
  double r_star = 0.0;        ///< the multiple root the curve accumulates on
  double limit_radius = 0.0;  ///< √r_star
  double final_gap = 0.0;     ///< ||(x,y)| − √r_star| at s_max
  double winding = 0.0;       ///< θ̃(s_max) − θ̃(0)
  double monotone_from = 0.0; ///< s after which the gap never increases
  double max_drift = 0.0;
  double start_gap = 0.0;     ///< relative r-distance of the start from r_star
  double turn_s = 0.0;        ///< arc length of the far turning point
  double resolved_s = 0.0;    ///< 2·turn_s; past it the flow is integrated on from next to the saddle
};

struct ExceptionalProfile {
  ProfileCurve curve;
  SpiralDiagnostics spiral;
};

struct ExceptionalOptions {
  StepControl ctrl;
  int samples = 4000;
  /// Relative r-distance of the start from r_star. Unset: 1e−9 next to a
  /// double root (exponential approach), 1e−3 next to a triple root, where
  /// the flow leaves and returns only algebraically; either is shrunk (to
  /// 1e−15 and 1e−5 at most) until the mirrored return reaches s_max.
  std::optional<double> start_gap;
};

/// Follows an exceptional level curve from next to its multiple root, out
/// through the far endpoint and back toward the root, up to arc length s_max.
/// The return half is the mirror image of the outbound half.
/// Inner takes the interval below the multiple root, Outer the one above.
ExceptionalProfile integrate_exceptional(const Params& p, ExceptionalSide side, double s_max,
                                         const ExceptionalOptions& opt = {});

/// The round cylinder sitting at a multiple root r_star: a circle of radius
/// √r_star with ξ₁ ≡ 0 and ξ₂ = ±√r_star, the sign fixed by the fixed-point
/// equation 2 + ξ₂(2Λ₀ − aξ₂²) = 0.
ProfileCurve cylinder_profile(const Params& p, double r_star, int samples = 512);

/// Sign of ξ₂ at the cylinder fixed point of radius √r_star.
int cylinder_orientation(const Params& p, double r_star);

enum class ImmersionVerdict { ProperlyImmersed, DenseInAnnulus, Exceptional };

struct RationalApprox {
  long n = 0;
  long m = 1;
  double residual = 0.0;  ///< |Δθ̃ − 2πn/m|
};

struct ImmersionReport {
  double delta_theta = 0.0;  ///< NaN for exceptional pieces
  RationalApprox approx;
  ImmersionVerdict verdict = ImmersionVerdict::DenseInAnnulus;
  double r_min = 0.0;  ///< inner annulus radius √r_lo
  double r_max = 0.0;  ///< outer annulus radius √r_hi
};

/// Best 2πn/m ≈ Δθ̃ with 1 ≤ m ≤ m_max from the continued-fraction
/// convergents of Δθ̃/(2π).
RationalApprox rational_angle(double delta_theta, int m_max);

ImmersionReport immersion_report(const FundamentalPieceSpec& spec, double rationality_tol = 1e-5,
                                 int m_max = 64);

}  // namespace helidrop

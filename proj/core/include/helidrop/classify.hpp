#pragma once

#include <optional>
#include <string>
#include <vector>

#include "helidrop/polynomial.hpp"
#include "helidrop/profile.hpp"
#include "helidrop/quadrature.hpp"

namespace helidrop {

enum class Region {
  Omega1,
  Omega2,
  Omega3,
  Beta1,
  Beta2,
  Beta3,
  SpecialPoint827,
  CaseIRegular,
  CaseICylinder,
  Cmc,  ///< a = 0 with Λ₀ = 1: constant mean curvature, no thresholds
  Empty
};

enum class SurfaceKind { Cylinder, Regular, Exceptional };

struct SurfaceDescriptor {
  SurfaceKind kind = SurfaceKind::Regular;
  double r_lo = 0.0;
  double r_hi = 0.0;
  /// Cylinder radius, or the limit-cycle radius of an exceptional curve.
  std::optional<double> radius;
  /// Cylinders: sign of ξ₂ at the fixed point (−1 = inward normal). 0 otherwise.
  int orientation = 0;
};

struct ModuliVerdict {
  Region region = Region::Empty;
  Params params;  ///< with C snapped onto a threshold when within tolerance
  bool snapped = false;
  RootStructure roots;
  std::vector<SurfaceDescriptor> surfaces;
};

/// Every drop represented by the level set G = C, read off the root
/// structure: a cylinder per multiple root, and per positivity interval a
/// regular piece (simple endpoints) or an exceptional one (multiple endpoint).
/// Accepts any Params.
std::vector<SurfaceDescriptor> surface_inventory(const Params& p, double mult_tol = kDefaultMultTol);

/// Moduli-space region and surface inventory. Requires Case I or Case II;
/// throws ValidationError otherwise. |C − Cᵢ| < boundary_tol snaps C onto
/// the threshold before the roots are computed.
ModuliVerdict classify(const Params& p, double boundary_tol = 1e-9);

/// (a, Λ₀, C) → (−a, −Λ₀, −C): the same quartic with the normal reversed.
Params flip_orientation(const Params& p);

enum class GridMarker { None, Limit, Asymptote, Jump, OutOfDomain };

struct GridEntry {
  double c = 0.0;
  std::optional<double> delta_theta;  ///< set for None, and for Limit (the closed-form limit)
  GridMarker marker = GridMarker::None;
  int component = 0;  ///< index of the continuity component holding c
};

/// Structural values of C where the Δθ̃ graph breaks, ascending: C₂, C₃, 0
/// for 0 < a < 8/27; −9/8, 0 at a = 8/27; 0 otherwise (and 0 in Case I).
std::vector<double> structural_values(const Params& p);

/// The C-range on which the Δθ̃ graph of the lowest positivity interval is
/// drawn, open at threshold ends: (C₀, C₀+span), (C₁, C₁+span) for a < 0,
/// (C₂, C₁) for 0 < a < 8/27, (C₁−span, C₁) for a ≥ 8/27.
std::pair<double, double> default_scan_range(const Params& p, double span = 20.0);

/// Δθ̃ of the lowest positivity interval at each grid value, with markers at
/// structural features. Work is spread over `threads` workers.
std::vector<GridEntry> delta_theta_profile(const Params& base, const std::vector<double>& c_grid,
                                           int threads = 0, double feature_tol = 1e-9);

struct SearchOptions {
  std::optional<std::pair<double, double>> range;  ///< scan range; default_scan_range when unset
  int grid_per_component = 200;
  double search_tol = 1e-8;  ///< on the angle residual
  int threads = 0;
  QuadratureConfig quad;
};

struct SearchResult {
  double target = 0.0;
  long n = 0;  ///< target = 2πn/m when built from a rational target, else 0
  long m = 0;
  double c_solution = 0.0;
  double residual = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  FundamentalPieceSpec piece;
};

/// Scans each continuity component of the default (or given) range for a
/// sign change of Δθ̃(C) − target and refines the first one found.
/// Throws NoBracket when no component shows a sign change.
SearchResult solve_for_angle(const Params& base, double target, const SearchOptions& opt = {});

/// Target Δθ̃ = 2πn/m.
SearchResult solve_for_rational(const Params& base, long n, long m, const SearchOptions& opt = {});

enum class EmbeddingVerdict { Embeddable, SelfIntersecting };

struct EmbeddingReport {
  EmbeddingVerdict verdict = EmbeddingVerdict::Embeddable;
  std::optional<std::pair<double, double>> crossing;  ///< first crossing found
  std::size_t segments = 0;
};

/// Segment-intersection sweep over the polyline of the profile; closed when
/// its end meets its start within `closure_tol`.
EmbeddingReport embedding_precheck(const ProfileCurve& profile, double closure_tol = 1e-6);

/// Integrates the solved piece, assembles m copies and sweeps the result.
EmbeddingReport embedding_precheck(const SearchResult& result, int samples_per_piece = 2048);

}  // namespace helidrop

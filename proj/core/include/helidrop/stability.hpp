#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "helidrop/mesh.hpp"
#include "helidrop/profile.hpp"

namespace helidrop {

/// The slab α × [−h/2, h/2] of the surface generated by a closed loop α of
/// the TreadmillSled flow.
struct StabilityInput {
  ProfileCurve piece;  ///< one fundamental loop, or an assembled profile
  double h = 1.0;
  Params params;
};

/// Integrands of the loop integrals at one profile sample.
struct LoopSample {
  double s = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double area_density = 0.0;  ///< S = √(1+ω²ξ₁²)
  double r = 0.0;             ///< R² = ξ₁² + ξ₂²
  double dxi1 = 0.0;          ///< ξ₁′ = 1 + κξ₂
  double nu3 = 0.0;
  double dnu3 = 0.0;          ///< (ν₃)_s = ωξ₁′S⁻³
  double k = 0.0;             ///< Gaussian curvature
  double potential = 0.0;     ///< 4H² − 2K + aQ̂
};

/// Throws ValidationError unless h > 0 and the loop closes in the
/// TreadmillSled plane to 1e−6.
std::vector<LoopSample> loop_samples(const StabilityInput& in);

/// ∮K√(1+ω²ξ₁²)ds and ∮|K|√(1+ω²ξ₁²)ds (trapezoid over the samples).
std::pair<double, double> k_integral(const ProfileCurve& piece);

struct Bound1 {
  double lhs = 0.0;    ///< (4π²/h²)∮S⁻¹ds
  double rhs = 0.0;    ///< ∮(4H² − 2K + aQ̂)S ds
  double h_max = 0.0;  ///< +∞ when rhs ≤ 0
  bool violated = false;
};

/// Necessary condition from ψ = sin(2πt/h), read off the quadratic form.
Bound1 bound1_check(const StabilityInput& in);

struct BoundBB {
  double lhs = 0.0;  ///< 4π²e⁴/h²
  double rhs = 0.0;  ///< ω²∮(1+ω²R²)ξ₁′²S⁻⁷ds / ∮S⁻²ds
  double h_max = 0.0;
  bool violated = false;
};

/// Height bound from ψ = e^{ν₃}sin(2πt/h). Throws RoundCylinderInput when
/// ξ₁ has variance ≤ 1e−12 along the loop.
BoundBB bb_height_bound(const StabilityInput& in);

/// The same bound with the numerator read as (1 + ω²R²(1+κξ₂)²); kept for
/// comparison only.
double bb_rhs_alternate(const StabilityInput& in);

enum class TestFunction { Zero, Unit, ExpNu3 };

struct SecondVariation {
  double value = 0.0;
  double cross_term = 0.0;  ///< contribution of −2ωξ₂ψ_sψ_t
  double mean = 0.0;        ///< ∫ψ dΣ
};

/// δ²ℰ for ψ = u(s)·sin(2πt/h + phase), integrated over the slab: midpoint
/// rule with nt nodes in t (exact for these trigonometric products), trapezoid
/// in s.
SecondVariation second_variation_separable(const StabilityInput& in, TestFunction u, double phase = 0.0,
                                           int nt = 32);

/// Same for an arbitrary u(s) given as (u, u_s) per loop sample.
SecondVariation second_variation_separable(const StabilityInput& in,
                                           const std::function<std::pair<double, double>(const LoopSample&)>& u,
                                           double phase = 0.0, int nt = 32);

/// The closed expression stated for ψ = e^{ν₃}sin(2πt/h):
///   (2π²/h)∮e^{2ν₃}S⁻²ds − (h/2)∮e^{2ν₃}(1+ω²R²)S⁻¹(ν₃)_s²ds.
double bb_proof_expression(const StabilityInput& in);

/// Residual of the Jacobi equation ((1+ω²R²)S⁻¹(ν₃)_s)_s + V S ν₃ = 0 by
/// central differences, relative to the largest term. Checks the potential.
double jacobi_residual(const StabilityInput& in);

struct StabilityReport {
  std::optional<Bound1> bound1;
  std::optional<BoundBB> bb;
  double k_integral = 0.0;
  double k_abs_integral = 0.0;
  double second_var_value = 0.0;
  TestFunction test_function = TestFunction::Unit;
  double area = 0.0;  ///< h·∮S ds
  std::vector<std::pair<double, double>> potential_profile;
};

enum class BoundSelection { All, Bound1, BB };

/// Everything at once. With BoundSelection::All the (bb) bound is skipped on
/// a round cylinder; asking for BB alone there throws RoundCylinderInput.
StabilityReport stability_report(const StabilityInput& in, BoundSelection which = BoundSelection::All,
                                 TestFunction test = TestFunction::Unit);

struct FluxIntegrals {
  double volume = 0.0;     ///< ∫W₀·ν dΣ, W₀ = (x₁, x₂, 0)/2
  double r2_moment = 0.0;  ///< ∫W·ν dΣ, W = (R²/4)(x₁, x₂, 0)
  double area = 0.0;
  double energy = 0.0;     ///< area − (a/2)·r2_moment + Λ₀·volume
};

/// Flux integrals over the triangulated patch, oriented by its vertex normals.
/// Throws DegenerateMesh on a zero-area face.
FluxIntegrals flux_integrals(const SurfacePatch& patch);

}  // namespace helidrop

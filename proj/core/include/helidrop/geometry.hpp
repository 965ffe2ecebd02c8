#pragma once

#include <array>
#include <cmath>

namespace helidrop {

/// Normalized parameter cases. Every helicoidal drop is, up to dilation,
/// rigid motion and orientation, either Case I (Λ₀ = 0, a = −1) or Case II
/// (Λ₀ = 1, a arbitrary). `General` covers everything else; the pointwise
/// geometry accepts it, the moduli classification does not.
enum class Case { I, II, General };

/// One candidate drop family: the coupling `a`, the multiplier Λ₀, the
/// helicoidal pitch ω and the level constant C of the first integral G.
struct Params {
  double a = 0.0;
  double lambda0 = 1.0;
  double omega = 1.0;
  double c = 0.0;

  static Params case_one(double omega, double c) { return {-1.0, 0.0, omega, c}; }
  static Params case_two(double a, double omega, double c) { return {a, 1.0, omega, c}; }

  Params with_c(double new_c) const {
    Params p = *this;
    p.c = new_c;
    return p;
  }
};

Case normalized_case(const Params& p);

/// Throws ValidationError unless all fields are finite and ω > 0.
void validate(const Params& p);

/// Case-I critical level C₀ = −3·2^(−2/3); the C₀ level set is the single
/// point (0, −∛2), the trace of the round cylinder of radius ∛2.
inline double case_one_c0() { return -3.0 / std::cbrt(4.0); }

/// A point of the TreadmillSled plane.
struct TSPoint {
  double xi1 = 0.0;
  double xi2 = 0.0;

  /// r = ξ₁² + ξ₂², the squared distance of the profile point to the axis.
  double r() const { return xi1 * xi1 + xi2 * xi2; }
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// Pointwise geometry of the helicoidal surface along one profile sample.
struct GeomSample {
  double h = 0.0;             ///< mean curvature H
  double k = 0.0;             ///< Gaussian curvature K
  double nu3 = 0.0;           ///< third normal component ν₃
  double qhat = 0.0;          ///< reduced support function Q̂ = Q − x₃ν₃
  double area_density = 0.0;  ///< √(1+ω²ξ₁²), the dΣ factor per ds·dt
};

/// G(ξ₁,ξ₂) = 2ξ₂/√(1+ω²ξ₁²) + Λ₀r − (a/4)r².
double g_value(const Params& p, TSPoint pt);

/// ∂G/∂ξ₁ and ∂G/∂ξ₂.
std::array<double, 2> g_gradient(const Params& p, TSPoint pt);

/// 2Q̂ + Λ₀r − a r²/4 − C; vanishes on an equilibrium surface.
double conservation_residual(const Params& p, double qhat, double r);

/// Unit normal of the immersion at profile sample (ξ, θ) and helix parameter t.
Vec3 gauss_map(const Params& p, TSPoint pt, double theta, double t);

/// Planar curvature θ′ of the profile, fixed by the equilibrium equation:
///   θ′ = (2ω²ξ₂ − 2Λ₀S³ + a r S³) / (2(1+ω²r)),   S = √(1+ω²ξ₁²).
/// With it ξ₁′ = 1 − ξ₂θ′ and ξ₂′ = ξ₁θ′.
double profile_curvature(const Params& p, TSPoint pt);

/// Curvatures with an externally supplied κ, measured against the surface
/// normal so that 1 + κξ₂ = ξ₁′ (that is κ = −θ′):
///   K = −ω²(1+κξ₂)/(1+ω²ξ₁²)²,  2H = Λ₀ − a r/2.
GeomSample curvatures(const Params& p, TSPoint pt, double kappa);

/// Same, with κ recomputed from (ξ₁, ξ₂).
GeomSample curvatures(const Params& p, TSPoint pt);

/// Potential of the second-variation operator, |dν|² + aQ̂ = 4H² − 2K + aQ̂.
double stability_potential(const Params& p, TSPoint pt);

}  // namespace helidrop

#include "helidrop/geometry.hpp"

#include <cmath>
#include <sstream>

#include "helidrop/error.hpp"

namespace helidrop {

Case normalized_case(const Params& p) {
  if (p.lambda0 == 0.0 && p.a == -1.0) return Case::I;
  if (p.lambda0 == 1.0) return Case::II;
  return Case::General;
}

void validate(const Params& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.lambda0) || !std::isfinite(p.omega) ||
      !std::isfinite(p.c)) {
    throw ValidationError("parameters must be finite");
  }
  if (!(p.omega > 0.0)) {
    std::ostringstream os;
    os << "omega must be positive (got " << p.omega << ")";
    throw ValidationError(os.str());
  }
}

double g_value(const Params& p, TSPoint pt) {
  const double r = pt.r();
  const double s = std::sqrt(1.0 + p.omega * p.omega * pt.xi1 * pt.xi1);
  return 2.0 * pt.xi2 / s + p.lambda0 * r - 0.25 * p.a * r * r;
}

std::array<double, 2> g_gradient(const Params& p, TSPoint pt) {
  const double w2 = p.omega * p.omega;
  const double r = pt.r();
  const double s2 = 1.0 + w2 * pt.xi1 * pt.xi1;
  const double s3 = s2 * std::sqrt(s2);
  const double radial = 2.0 * p.lambda0 - p.a * r;
  return {-2.0 * w2 * pt.xi1 * pt.xi2 / s3 + radial * pt.xi1,
          2.0 / std::sqrt(s2) + radial * pt.xi2};
}

double conservation_residual(const Params& p, double qhat, double r) {
  return 2.0 * qhat + p.lambda0 * r - 0.25 * p.a * r * r - p.c;
}

Vec3 gauss_map(const Params& p, TSPoint pt, double theta, double t) {
  const double phase = theta - p.omega * t;
  const double inv = 1.0 / std::sqrt(1.0 + p.omega * p.omega * pt.xi1 * pt.xi1);
  return {std::sin(phase) * inv, -std::cos(phase) * inv, -p.omega * pt.xi1 * inv};
}

double profile_curvature(const Params& p, TSPoint pt) {
  const double w2 = p.omega * p.omega;
  const double r = pt.r();
  const double s2 = 1.0 + w2 * pt.xi1 * pt.xi1;
  const double s3 = s2 * std::sqrt(s2);
  return (2.0 * w2 * pt.xi2 - 2.0 * p.lambda0 * s3 + p.a * r * s3) / (2.0 * (1.0 + w2 * r));
}

GeomSample curvatures(const Params& p, TSPoint pt, double kappa) {
  const double w2 = p.omega * p.omega;
  const double s2 = 1.0 + w2 * pt.xi1 * pt.xi1;
  const double s = std::sqrt(s2);
  GeomSample g;
  g.h = 0.5 * (p.lambda0 - 0.5 * p.a * pt.r());
  g.k = -w2 * (1.0 + kappa * pt.xi2) / (s2 * s2);
  g.nu3 = p.omega * pt.xi1 / s;
  g.qhat = pt.xi2 / s;
  g.area_density = s;
  return g;
}

GeomSample curvatures(const Params& p, TSPoint pt) {
  return curvatures(p, pt, -profile_curvature(p, pt));
}

double stability_potential(const Params& p, TSPoint pt) {
  const GeomSample g = curvatures(p, pt);
  return 4.0 * g.h * g.h - 2.0 * g.k + p.a * g.qhat;
}

}  // namespace helidrop

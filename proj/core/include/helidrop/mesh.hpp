#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "helidrop/profile.hpp"

namespace helidrop {

/// Sampled immersion φ(s,t) = (x cos ωt + y sin ωt, −x sin ωt + y cos ωt, t)
/// over profile samples × t-grid, with Gauss-map normals at the vertices.
struct SurfacePatch {
  Params params;
  std::size_t ns = 0;  ///< vertices per t-row
  std::size_t nt = 0;  ///< t-rows
  double t0 = 0.0;
  double t1 = 0.0;
  bool closed_in_s = false;          ///< the profile is a closed planar curve; faces wrap around
  std::vector<Vec3> vertices;        ///< row-major, index j·ns + i (i along s, j along t)
  std::vector<Vec3> normals;
  std::vector<double> s;             ///< arc length of column i
  std::vector<std::array<std::size_t, 4>> quads;  ///< counter-clockwise about the vertex normals

  const Vec3& vertex(std::size_t i, std::size_t j) const { return vertices[j * ns + i]; }
};

/// Throws EmptyProfile for fewer than two samples, ValidationError for nt < 2
/// or t1 ≤ t0. A profile whose end meets its start within 1e−9 relative is
/// treated as closed: the repeated end sample is dropped and faces wrap.
SurfacePatch build_patch(const ProfileCurve& profile, double t0, double t1, std::size_t nt);

struct ObjOptions {
  bool triangulate = false;  ///< split each quad along its (0,2) diagonal
};

/// Wavefront OBJ: "v" lines with six decimals, "vn" lines, "f v//vn" faces.
void write_obj(const SurfacePatch& patch, std::ostream& out, const ObjOptions& opt = {});
void export_obj(const SurfacePatch& patch, const std::string& path, const ObjOptions& opt = {});

struct ObjMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::vector<std::size_t>> faces;  ///< 0-based vertex indices
};

/// Reads the subset of OBJ written by write_obj. Throws IoFailure.
ObjMesh import_obj(const std::string& path);
ObjMesh read_obj(std::istream& in);

struct SvgStyle {
  std::string stroke = "#1b4f72";
  std::string highlight = "#c0392b";
  std::string circle = "#999999";
  double stroke_width = 0.0;  ///< 0: scaled to the drawing
  int size_px = 640;
  bool highlight_piece = true;
  bool bounding_circles = true;
};

/// SVG 1.1 drawing of the planar profile: one path for the curve, a second
/// for its first fundamental piece, and the circles of radius √r_lo, √r_hi.
void write_profile_svg(const ProfileCurve& profile, std::ostream& out, const SvgStyle& style = {});
void export_profile_svg(const ProfileCurve& profile, const std::string& path, const SvgStyle& style = {});

}  // namespace helidrop

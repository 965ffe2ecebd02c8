#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "helidrop/error.hpp"
#include "helidrop/mesh.hpp"
#include "support.hpp"

using namespace helidrop;
using helidrop::testing::lowest_piece;

namespace {

Vec3 phi(double w, double x, double y, double t) {
  return {x * std::cos(w * t) + y * std::sin(w * t), -x * std::sin(w * t) + y * std::cos(w * t), t};
}

struct Box {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  std::size_t points = 0;
};

Box path_box(const std::string& svg, const std::string& id) {
  // std::regex recurses per character and overflows on long paths.
  Box b;
  const std::size_t tag = svg.find("<path id=\"" + id + "\"");
  if (tag == std::string::npos) return b;
  const std::size_t open = svg.find(" d=\"", tag);
  if (open == std::string::npos || open > svg.find('>', tag)) return b;
  const std::size_t close = svg.find('"', open + 4);
  std::istringstream d(svg.substr(open + 4, close - open - 4));
  std::string cmd;
  double x, y;
  while (d >> cmd) {
    x = std::stod(cmd.substr(1).empty() ? (d >> cmd, cmd) : cmd.substr(1));
    d >> y;
    b.x0 = std::min(b.x0, x), b.x1 = std::max(b.x1, x);
    b.y0 = std::min(b.y0, y), b.y1 = std::max(b.y1, y);
    ++b.points;
  }
  return b;
}

}  // namespace

TEST(BuildPatch, VerticesFollowTheHelicoidalMotion) {
  const Params p = Params::case_two(0.2, 0.15, 5.0);
  const ProfileCurve c = lowest_piece(p, 64);
  const SurfacePatch patch = build_patch(c, -1.0, 2.0, 7);
  EXPECT_FALSE(patch.closed_in_s);  // one piece turns by Δθ̃ ≈ 1.61, it does not close
  EXPECT_EQ(patch.ns, 65u);
  EXPECT_EQ(patch.nt, 7u);
  EXPECT_EQ(patch.quads.size(), 64u * 6u);
  for (std::size_t j = 0; j < patch.nt; ++j) {
    const double t = -1.0 + 3.0 * j / 6.0;
    for (std::size_t i = 0; i < patch.ns; ++i) {
      const Vec3 want = phi(0.15, c.samples[i].x, c.samples[i].y, t);
      EXPECT_NEAR((patch.vertex(i, j) - want).norm(), 0.0, 1e-12);
    }
  }
}

TEST(BuildPatch, NormalsAreUnitAndOrthogonalToTangents) {
  const Params p = Params::case_two(0.2, 1.0, -0.8);
  const ProfileCurve c = lowest_piece(p, 2048);
  const SurfacePatch patch = build_patch(c, 0.0, 2e-3, 3);
  for (std::size_t i = 1; i + 1 < patch.ns; i += 37) {
    const Vec3& n = patch.normals[patch.ns + i];
    EXPECT_NEAR(n.norm(), 1.0, 1e-12);
    const Vec3 ts = patch.vertex(i + 1, 1) - patch.vertex(i - 1, 1);
    const Vec3 tt = patch.vertex(i, 2) - patch.vertex(i, 0);
    EXPECT_NEAR(n.dot(ts) / ts.norm(), 0.0, 1e-5);
    EXPECT_NEAR(n.dot(tt) / tt.norm(), 0.0, 1e-4);
  }
}

TEST(BuildPatch, QuadsWindAboutTheNormals) {
  const SurfacePatch patch = build_patch(lowest_piece(Params::case_two(-1.0, 1.0, 0.5), 128), 0.0, 1.0, 4);
  for (const auto& q : patch.quads) {
    const Vec3 e1 = patch.vertices[q[1]] - patch.vertices[q[0]];
    const Vec3 e2 = patch.vertices[q[3]] - patch.vertices[q[0]];
    EXPECT_GT(e1.cross(e2).dot(patch.normals[q[0]]), 0.0);
  }
}

TEST(BuildPatch, ClosedProfileWraps) {
  const ProfileCurve c = assemble_profile(lowest_piece(Params::case_two(0.2, 0.15, 4.72283004648621), 64), 4);
  const SurfacePatch patch = build_patch(c, 0.0, 1.0, 2);
  EXPECT_TRUE(patch.closed_in_s);
  EXPECT_EQ(patch.ns, 256u);
  EXPECT_EQ(patch.quads.size(), 256u);
  EXPECT_EQ(patch.quads.back()[1] % patch.ns, 0u);
}

TEST(BuildPatch, Validation) {
  const ProfileCurve c = lowest_piece(Params::case_two(0.2, 0.15, 5.0), 64);
  EXPECT_THROW(build_patch(c, 0.0, 1.0, 1), ValidationError);
  EXPECT_THROW(build_patch(c, 1.0, 1.0, 4), ValidationError);
  EXPECT_THROW(build_patch(ProfileCurve{}, 0.0, 1.0, 4), EmptyProfile);
}

TEST(Obj, RoundTrip) {
  const SurfacePatch patch = build_patch(lowest_piece(Params::case_two(0.2, 0.15, 5.0), 64), 0.0, 1.0, 3);
  std::stringstream ss;
  write_obj(patch, ss);
  const ObjMesh m = read_obj(ss);
  ASSERT_EQ(m.vertices.size(), patch.vertices.size());
  ASSERT_EQ(m.normals.size(), patch.normals.size());
  ASSERT_EQ(m.faces.size(), patch.quads.size());
  for (std::size_t k = 0; k < m.vertices.size(); ++k) EXPECT_NEAR((m.vertices[k] - patch.vertices[k]).norm(), 0.0, 1e-6);
  for (std::size_t f = 0; f < m.faces.size(); ++f) {
    ASSERT_EQ(m.faces[f].size(), 4u);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(m.faces[f][k], patch.quads[f][k]);
  }
  std::stringstream tri;
  write_obj(patch, tri, {.triangulate = true});
  const ObjMesh mt = read_obj(tri);
  EXPECT_EQ(mt.faces.size(), 2 * patch.quads.size());
  for (const auto& f : mt.faces) EXPECT_EQ(f.size(), 3u);
}

TEST(Obj, MalformedInputThrows) {
  std::istringstream bad_v("v 1.0 oops 2.0\n");
  EXPECT_THROW(read_obj(bad_v), IoFailure);
  std::istringstream bad_f("v 0 0 0\nf 1//1 2//2 7//7\n");
  EXPECT_THROW(read_obj(bad_f), IoFailure);
  EXPECT_THROW(import_obj("/nonexistent/dir/x.obj"), IoFailure);
}

TEST(Svg, AssembledProfileStaysInTheAnnulus) {
  const ProfileCurve piece = lowest_piece(Params::case_two(0.2, 0.15, 4.72283004648621), 256);
  const ProfileCurve full = assemble_profile(piece, 4);
  std::ostringstream os;
  write_profile_svg(full, os);
  const std::string svg = os.str();
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 3, true);
  const Box b = path_box(svg, "profile");
  EXPECT_EQ(b.points, full.samples.size());
  const double R = std::sqrt(full.r_hi);
  EXPECT_LE(std::max({-b.x0, b.x1, -b.y0, b.y1}), R + 1e-5);
  // Four-fold symmetric: the box is (nearly) square about the origin.
  EXPECT_NEAR(b.x1, -b.x0, 1e-2 * R);
  EXPECT_NEAR(b.y1, -b.y0, 1e-2 * R);
  EXPECT_EQ(path_box(svg, "piece").points, piece.samples.size());
}

TEST(Svg, ExceptionalSpiralAccumulatesOnItsCircle) {
  const Thresholds t = thresholds(0.2);
  const ExceptionalProfile ex = integrate_exceptional(Params::case_two(0.2, 0.15, *t.c3), ExceptionalSide::Outer, 80.0);
  std::ostringstream os;
  write_profile_svg(ex.curve, os);
  const Box b = path_box(os.str(), "profile");
  const double rs = ex.spiral.limit_radius;
  const double rh = std::sqrt(ex.curve.r_hi);
  EXPECT_LE(std::max({-b.x0, b.x1, -b.y0, b.y1}), rh + 1e-5);
  EXPECT_GE(std::min({-b.x0, b.x1, -b.y0, b.y1}), rs - 1e-5);
  EXPECT_EQ(path_box(os.str(), "piece").points, 0u);
  EXPECT_THROW(write_profile_svg(ProfileCurve{}, os), EmptyProfile);
}

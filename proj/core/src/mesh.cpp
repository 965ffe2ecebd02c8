#include "helidrop/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "helidrop/error.hpp"

namespace helidrop {

SurfacePatch build_patch(const ProfileCurve& profile, double t0, double t1, std::size_t nt) {
  if (profile.samples.size() < 2) throw EmptyProfile("patch needs at least two profile samples");
  if (nt < 2) throw ValidationError("patch needs nt >= 2");
  if (!(t1 > t0)) throw ValidationError("patch needs t1 > t0");
  const Params& p = profile.params;

  double scale = 1.0;
  for (const ProfileSample& smp : profile.samples) scale = std::max(scale, std::sqrt(smp.r()));
  std::size_t n = profile.samples.size();
  SurfacePatch patch;
  patch.params = p;
  patch.closed_in_s = n > 3 && closure_gap(profile) <= 1e-9 * scale;
  if (patch.closed_in_s) --n;
  patch.ns = n;
  patch.nt = nt;
  patch.t0 = t0;
  patch.t1 = t1;
  patch.vertices.reserve(n * nt);
  patch.normals.reserve(n * nt);
  for (std::size_t i = 0; i < n; ++i) patch.s.push_back(profile.samples[i].s);

  for (std::size_t j = 0; j < nt; ++j) {
    const double t = t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(nt - 1);
    const double c = std::cos(p.omega * t), sn = std::sin(p.omega * t);
    for (std::size_t i = 0; i < n; ++i) {
      const ProfileSample& smp = profile.samples[i];
      patch.vertices.push_back({smp.x * c + smp.y * sn, -smp.x * sn + smp.y * c, t});
      patch.normals.push_back(gauss_map(p, {smp.xi1, smp.xi2}, smp.theta, t));
    }
  }

  const std::size_t cols = patch.closed_in_s ? n : n - 1;
  for (std::size_t j = 0; j + 1 < nt; ++j) {
    for (std::size_t i = 0; i < cols; ++i) {
      const std::size_t i2 = (i + 1) % n;
      patch.quads.push_back({j * n + i, j * n + i2, (j + 1) * n + i2, (j + 1) * n + i});
    }
  }

  // One sign for the whole grid: φ_s × φ_t against the Gauss map.
  for (const auto& q : patch.quads) {
    const Vec3 e1 = patch.vertices[q[1]] - patch.vertices[q[0]];
    const Vec3 e2 = patch.vertices[q[3]] - patch.vertices[q[0]];
    const Vec3 nrm = e1.cross(e2);
    const double d = nrm.dot(patch.normals[q[0]]);
    if (nrm.norm() == 0.0) continue;
    if (d < 0.0) {
      for (auto& f : patch.quads) std::swap(f[1], f[3]);
    }
    break;
  }
  return patch;
}

namespace {

void put_vec(std::ostream& out, const char* tag, const Vec3& v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s %.6f %.6f %.6f\n", tag, v.x, v.y, v.z);
  out << buf;
}

void put_face(std::ostream& out, std::initializer_list<std::size_t> idx) {
  out << 'f';
  for (std::size_t k : idx) out << ' ' << k + 1 << "//" << k + 1;
  out << '\n';
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + path + " for writing");
  fn(f);
  f.flush();
  if (!f) throw IoFailure("write to " + path + " failed");
}

}  // namespace

void write_obj(const SurfacePatch& patch, std::ostream& out, const ObjOptions& opt) {
  out << "# helidrop surface patch " << patch.ns << " x " << patch.nt << '\n';
  for (const Vec3& v : patch.vertices) put_vec(out, "v", v);
  for (const Vec3& n : patch.normals) put_vec(out, "vn", n);
  for (const auto& q : patch.quads) {
    if (opt.triangulate) {
      put_face(out, {q[0], q[1], q[2]});
      put_face(out, {q[0], q[2], q[3]});
    } else {
      put_face(out, {q[0], q[1], q[2], q[3]});
    }
  }
}

void export_obj(const SurfacePatch& patch, const std::string& path, const ObjOptions& opt) {
  write_file(path, [&](std::ostream& f) { write_obj(patch, f, opt); });
}

ObjMesh read_obj(std::istream& in) {
  ObjMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v" || tag == "vn") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z)) throw IoFailure("malformed " + tag + " at line " + std::to_string(lineno));
      (tag == "v" ? mesh.vertices : mesh.normals).push_back(v);
    } else if (tag == "f") {
      std::vector<std::size_t> face;
      std::string tok;
      while (ls >> tok) {
        const std::size_t k = std::stoul(tok.substr(0, tok.find('/')));
        if (k == 0 || k > mesh.vertices.size()) {
          throw IoFailure("face index out of range at line " + std::to_string(lineno));
        }
        face.push_back(k - 1);
      }
      if (face.size() < 3) throw IoFailure("face with fewer than 3 vertices at line " + std::to_string(lineno));
      mesh.faces.push_back(std::move(face));
    }
  }
  return mesh;
}

ObjMesh import_obj(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open " + path);
  return read_obj(f);
}

void write_profile_svg(const ProfileCurve& profile, std::ostream& out, const SvgStyle& style) {
  if (profile.samples.empty()) throw EmptyProfile("cannot draw an empty profile");
  double extent = std::sqrt(std::max(profile.r_hi, 0.0));
  for (const ProfileSample& smp : profile.samples) extent = std::max(extent, std::sqrt(smp.r()));
  extent = extent > 0.0 ? 1.05 * extent : 1.0;
  const double width = style.stroke_width > 0.0 ? style.stroke_width : 3.0 * extent / style.size_px;

  char buf[256];
  auto path_of = [&](std::size_t count) {
    std::string d;
    for (std::size_t i = 0; i < count; ++i) {
      std::snprintf(buf, sizeof buf, "%s%.6f %.6f", i == 0 ? "M" : " L", profile.samples[i].x, profile.samples[i].y);
      d += buf;
    }
    return d;
  };

  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%d\" height=\"%d\" "
                "viewBox=\"%.6f %.6f %.6f %.6f\">\n",
                style.size_px, style.size_px, -extent, -extent, 2.0 * extent, 2.0 * extent);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << buf;
  out << "<g transform=\"scale(1,-1)\" fill=\"none\">\n";
  if (style.bounding_circles) {
    for (double r2 : {profile.r_lo, profile.r_hi}) {
      if (r2 <= 0.0) continue;
      std::snprintf(buf, sizeof buf, "<circle cx=\"0\" cy=\"0\" r=\"%.6f\" stroke=\"%s\" stroke-width=\"%.6f\" "
                    "stroke-dasharray=\"%.6f\"/>\n",
                    std::sqrt(r2), style.circle.c_str(), 0.5 * width, 4.0 * width);
      out << buf;
    }
  }
  out << "<path id=\"profile\" stroke=\"" << style.stroke << "\" stroke-width=\"" << width << "\" d=\""
      << path_of(profile.samples.size()) << "\"/>\n";
  if (style.highlight_piece && profile.piece_count > 1) {
    const std::size_t per_piece = (profile.samples.size() - 1) / static_cast<std::size_t>(profile.piece_count) + 1;
    out << "<path id=\"piece\" stroke=\"" << style.highlight << "\" stroke-width=\"" << 2.0 * width << "\" d=\""
        << path_of(std::min(per_piece, profile.samples.size())) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void export_profile_svg(const ProfileCurve& profile, const std::string& path, const SvgStyle& style) {
  write_file(path, [&](std::ostream& f) { write_profile_svg(profile, f, style); });
}

}  // namespace helidrop

#include "helidrop/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "helidrop/error.hpp"

namespace helidrop {

using nlohmann::json;

const char* to_string(Region r) {
  switch (r) {
    case Region::Omega1: return "omega1";
    case Region::Omega2: return "omega2";
    case Region::Omega3: return "omega3";
    case Region::Beta1: return "beta1";
    case Region::Beta2: return "beta2";
    case Region::Beta3: return "beta3";
    case Region::SpecialPoint827: return "special_point_827";
    case Region::CaseIRegular: return "case_i_regular";
    case Region::CaseICylinder: return "case_i_cylinder";
    case Region::Cmc: return "cmc";
    case Region::Empty: return "empty";
  }
  return "unknown";
}

const char* to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::Cylinder: return "cylinder";
    case SurfaceKind::Regular: return "regular";
    case SurfaceKind::Exceptional: return "exceptional";
  }
  return "unknown";
}

const char* to_string(GridMarker m) {
  switch (m) {
    case GridMarker::None: return "none";
    case GridMarker::Limit: return "limit";
    case GridMarker::Asymptote: return "asymptote";
    case GridMarker::Jump: return "jump";
    case GridMarker::OutOfDomain: return "out_of_domain";
  }
  return "unknown";
}

const char* to_string(EmbeddingVerdict v) {
  return v == EmbeddingVerdict::Embeddable ? "embeddable" : "self_intersecting";
}

const char* to_string(ImmersionVerdict v) {
  switch (v) {
    case ImmersionVerdict::ProperlyImmersed: return "properly_immersed";
    case ImmersionVerdict::DenseInAnnulus: return "dense_in_annulus";
    case ImmersionVerdict::Exceptional: return "exceptional";
  }
  return "unknown";
}

const char* to_string(TestFunction t) {
  switch (t) {
    case TestFunction::Zero: return "zero";
    case TestFunction::Unit: return "unit";
    case TestFunction::ExpNu3: return "exp_nu3";
  }
  return "unknown";
}

const char* to_string(Case c) {
  switch (c) {
    case Case::I: return "i";
    case Case::II: return "ii";
    case Case::General: return "general";
  }
  return "unknown";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    if (field == "nan") return std::nan("");
    if (field == "inf") return INFINITY;
    if (field == "-inf") return -INFINITY;
    throw IoFailure("bad number '" + field + "' on CSV line " + std::to_string(line));
  }
  return v;
}

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open " + path + " for writing");
  fn(f);
  f.flush();
  if (!f) throw IoFailure("write to " + path + " failed");
}

json params_object(const Params& p) {
  return {{"case", to_string(normalized_case(p))},
          {"a", num(p.a)},
          {"lambda0", num(p.lambda0)},
          {"omega", num(p.omega)},
          {"c", num(p.c)}};
}

json immersion_object(const ImmersionReport& r) {
  return {{"delta_theta", num(r.delta_theta)},
          {"verdict", to_string(r.verdict)},
          {"n", r.approx.n},
          {"m", r.approx.m},
          {"rational_residual", num(r.approx.residual)},
          {"r_min", num(r.r_min)},
          {"r_max", num(r.r_max)}};
}

}  // namespace

constexpr const char* kProfileHeader = "s,x,y,xi1,xi2,theta,theta_tilde";

void write_profile_csv(const ProfileCurve& curve, std::ostream& out) {
  out << kProfileHeader << '\n';
  for (const ProfileSample& s : curve.samples) {
    out << format_double(s.s) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
        << format_double(s.xi1) << ',' << format_double(s.xi2) << ',' << format_double(s.theta) << ','
        << format_double(s.theta_tilde) << '\n';
  }
}

void export_profile_csv(const ProfileCurve& curve, const std::string& path) {
  write_file(path, [&](std::ostream& f) { write_profile_csv(curve, f); });
}

ProfileCurve read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoFailure("empty profile CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kProfileHeader) throw IoFailure("unexpected profile CSV header: " + line);
  ProfileCurve curve;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[7];
    std::size_t start = 0;
    for (int k = 0; k < 7; ++k) {
      const std::size_t comma = line.find(',', start);
      if ((k < 6) != (comma != std::string::npos)) {
        throw IoFailure("expected 7 fields on CSV line " + std::to_string(lineno));
      }
      v[k] = parse_double(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start), lineno);
      start = comma + 1;
    }
    curve.samples.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return curve;
}

ProfileCurve import_profile_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open " + path);
  return read_profile_csv(f);
}

void write_grid_csv(const std::vector<GridEntry>& grid, std::ostream& out) {
  out << "c,delta_theta,marker,component\n";
  for (const GridEntry& e : grid) {
    out << format_double(e.c) << ',' << (e.delta_theta ? format_double(*e.delta_theta) : std::string()) << ','
        << to_string(e.marker) << ',' << e.component << '\n';
  }
}

void write_potential_csv(const StabilityReport& rep, std::ostream& out) {
  out << "s,potential\n";
  for (const auto& [s, v] : rep.potential_profile) out << format_double(s) << ',' << format_double(v) << '\n';
}

std::string params_json(const Params& p, int indent) { return params_object(p).dump(indent); }

std::string classify_json(const ModuliVerdict& v, int indent) {
  json roots = json::array();
  for (const Root& r : v.roots.roots) roots.push_back({{"r", num(r.r)}, {"multiplicity", r.multiplicity}});
  json intervals = json::array();
  for (const PositiveInterval& iv : v.roots.intervals) {
    intervals.push_back({{"lo", num(iv.lo)}, {"hi", num(iv.hi)}, {"lo_mult", iv.lo_mult}, {"hi_mult", iv.hi_mult}});
  }
  json surfaces = json::array();
  for (const SurfaceDescriptor& s : v.surfaces) {
    surfaces.push_back({{"kind", to_string(s.kind)},
                        {"r_lo", num(s.r_lo)},
                        {"r_hi", num(s.r_hi)},
                        {"radius", num(s.radius)},
                        {"orientation", s.orientation}});
  }
  const json j = {{"region", to_string(v.region)}, {"snapped", v.snapped}, {"params", params_object(v.params)},
                  {"roots", roots},               {"intervals", intervals}, {"surfaces", surfaces}};
  return j.dump(indent);
}

std::string delta_theta_json(const Params& p, const std::optional<double>& delta_theta,
                             const std::optional<ImmersionReport>& immersion, int indent) {
  json j = {{"params", params_object(p)}, {"delta_theta", num(delta_theta)}, {"immersion", nullptr}};
  if (immersion) j["immersion"] = immersion_object(*immersion);
  return j.dump(indent);
}

std::string grid_json(const Params& base, const std::vector<GridEntry>& grid, int indent) {
  json rows = json::array();
  for (const GridEntry& e : grid) {
    rows.push_back({{"c", num(e.c)},
                    {"delta_theta", num(e.delta_theta)},
                    {"marker", to_string(e.marker)},
                    {"component", e.component}});
  }
  json p = params_object(base);
  p.erase("c");
  return json{{"params", p}, {"grid", rows}}.dump(indent);
}

std::string search_json(const Params& base, const SearchResult& r, const std::optional<EmbeddingReport>& embedding,
                        const std::optional<ImmersionReport>& immersion, int indent) {
  json j = {{"params", params_object(base.with_c(r.c_solution))},
            {"target", num(r.target)},
            {"n", r.n},
            {"m", r.m},
            {"c_solution", num(r.c_solution)},
            {"residual", num(r.residual)},
            {"bracket", {num(r.bracket.first), num(r.bracket.second)}},
            {"piece", {{"r_lo", num(r.piece.r_lo)}, {"r_hi", num(r.piece.r_hi)}}},
            {"never_embeddable_candidate", r.n > 1},
            {"embedding", nullptr},
            {"immersion", nullptr}};
  if (embedding) {
    j["embedding"] = {{"verdict", to_string(embedding->verdict)},
                      {"segments", embedding->segments},
                      {"crossing", nullptr}};
    if (embedding->crossing) {
      j["embedding"]["crossing"] = {num(embedding->crossing->first), num(embedding->crossing->second)};
    }
  }
  if (immersion) j["immersion"] = immersion_object(*immersion);
  return j.dump(indent);
}

std::string stability_json(const StabilityReport& rep, const StabilityContext& ctx, int indent) {
  json j = {{"params", params_object(ctx.params)},
            {"h", num(ctx.h)},
            {"cylinder", ctx.cylinder},
            {"k_integral", num(rep.k_integral)},
            {"k_abs_integral", num(rep.k_abs_integral)},
            {"area", num(rep.area)},
            {"test_function", to_string(rep.test_function)},
            {"second_var_value", num(rep.second_var_value)},
            {"bound1", nullptr},
            {"bb", nullptr},
            {"flux", nullptr}};
  if (rep.bound1) {
    const Bound1& b = *rep.bound1;
    j["bound1"] = {{"lhs", num(b.lhs)},
                   {"rhs", num(b.rhs)},
                   {"h_max", num(b.h_max)},
                   {"h_max_unbounded", std::isinf(b.h_max)},
                   {"violated", b.violated}};
  }
  if (rep.bb) {
    const BoundBB& b = *rep.bb;
    const double w2 = ctx.params.omega * ctx.params.omega;
    j["bb"] = {{"lhs", num(b.lhs)},
               {"rhs", num(b.rhs)},
               {"h_max", num(b.h_max)},
               {"violated", b.violated},
               {"rhs_ge_omega2", b.rhs >= w2}};
  }
  if (ctx.flux) {
    j["flux"] = {{"volume", num(ctx.flux->volume)},
                 {"r2_moment", num(ctx.flux->r2_moment)},
                 {"area", num(ctx.flux->area)},
                 {"energy", num(ctx.flux->energy)}};
  }
  if (ctx.include_potential) {
    json prof = json::array();
    for (const auto& [s, v] : rep.potential_profile) prof.push_back({num(s), num(v)});
    j["potential_profile"] = prof;
  }
  return j.dump(indent);
}

std::string error_json(const std::string& kind, const std::string& message, int indent) {
  return json{{"error", {{"kind", kind}, {"message", message}}}}.dump(indent);
}

}  // namespace helidrop

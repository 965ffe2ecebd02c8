// helidrop: classify, scan, search and stability-audit helicoidal rotating drops.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helidrop/classify.hpp"
#include "helidrop/error.hpp"
#include "helidrop/mesh.hpp"
#include "helidrop/parallel.hpp"
#include "helidrop/serialize.hpp"
#include "helidrop/stability.hpp"

namespace {

using namespace helidrop;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::string case_name = "II";
  std::optional<double> a;
  std::optional<double> lambda0;
  std::optional<double> omega;
  std::optional<double> c;
  bool json = false;
  int threads = 0;
  std::string output;
};

// Builds Params from the flags. `need_c` is false for commands that scan C;
// classification in Case I does not depend on omega.
Params make_params(const Common& o, bool need_c, bool omega_free_in_case_one = false) {
  Params p;
  if (o.case_name == "I" || o.case_name == "i") {
    if (o.a && *o.a != -1.0) throw ValidationError("Case I fixes a = -1");
    if (o.lambda0 && *o.lambda0 != 0.0) throw ValidationError("Case I fixes lambda0 = 0");
    p = Params::case_one(o.omega.value_or(1.0), o.c.value_or(0.0));
  } else if (o.case_name == "II" || o.case_name == "ii") {
    if (!o.a) throw ValidationError("--a is required for Case II");
    if (o.lambda0 && *o.lambda0 != 1.0) throw ValidationError("Case II fixes lambda0 = 1");
    p = Params::case_two(*o.a, o.omega.value_or(1.0), o.c.value_or(0.0));
  } else if (o.case_name == "general") {
    if (!o.a || !o.lambda0) throw ValidationError("--a and --lambda0 are required for --case general");
    p = {*o.a, *o.lambda0, o.omega.value_or(1.0), o.c.value_or(0.0)};
  } else {
    throw ValidationError("--case must be I, II or general");
  }
  if (!o.omega && !(omega_free_in_case_one && normalized_case(p) == Case::I)) {
    throw ValidationError("--omega is required");
  }
  if (need_c && !o.c) throw ValidationError("--c is required");
  validate(p);
  return p;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoFailure("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run_classify(const Common& o) {
  const Params p = make_params(o, true, true);
  const ModuliVerdict v = classify(p);
  Output out(o.output);
  if (o.json) {
    out.stream() << classify_json(v) << '\n';
    return 0;
  }
  auto& os = out.stream();
  os << "region   " << to_string(v.region) << (v.snapped ? "  (C snapped to threshold)" : "") << '\n';
  os << "C        " << fmt_num(v.params.c) << '\n';
  os << "roots   ";
  for (const Root& r : v.roots.roots) os << ' ' << fmt_num(r.r) << (r.multiplicity > 1 ? "^" + std::to_string(r.multiplicity) : "");
  os << '\n';
  for (const SurfaceDescriptor& s : v.surfaces) {
    os << "surface  " << to_string(s.kind) << "  r in [" << fmt_num(s.r_lo) << ", " << fmt_num(s.r_hi) << "]";
    if (s.radius) os << "  radius " << fmt_num(*s.radius);
    if (s.kind == SurfaceKind::Cylinder) os << "  orientation " << s.orientation;
    os << '\n';
  }
  return 0;
}

struct DeltaThetaOpts {
  int grid = -1;
  std::optional<double> c_min, c_max;
};

int run_delta_theta(const Common& o, const DeltaThetaOpts& d) {
  Output out(o.output);
  if (d.grid >= 0) {
    if (d.grid < 1) throw ValidationError("--grid must be at least 1");
    const Params base = make_params(o, false);
    auto range = default_scan_range(base);
    const double lo = d.c_min.value_or(range.first), hi = d.c_max.value_or(range.second);
    if (d.grid > 1 && !(hi > lo)) throw ValidationError("--c-max must exceed --c-min");
    std::vector<double> cs;
    for (int i = 0; i < d.grid; ++i) cs.push_back(d.grid == 1 ? lo : lo + (hi - lo) * i / (d.grid - 1));
    const auto grid = delta_theta_profile(base, cs, o.threads);
    if (o.json) {
      out.stream() << grid_json(base, grid) << '\n';
    } else {
      write_grid_csv(grid, out.stream());
    }
    return 0;
  }
  const Params p = make_params(o, true);
  const GridEntry e = delta_theta_profile(p, {p.c}, 1).front();
  if (!e.delta_theta) {
    throw DivergentAngle(std::string("delta_theta undefined at this C (") + to_string(e.marker) + ")");
  }
  std::optional<ImmersionReport> imm;
  if (e.marker == GridMarker::None) {
    const RootStructure rs = isolate_roots(build_quartic(p));
    imm = immersion_report(make_spec(p, rs.intervals.front()));
  }
  if (o.json) {
    out.stream() << delta_theta_json(p, e.delta_theta, imm) << '\n';
  } else {
    out.stream() << format_double(*e.delta_theta) << '\n';
  }
  return 0;
}

struct FindOpts {
  long m = 0;
  long n = 1;
  std::optional<double> c_min, c_max;
  int samples = 2048;
  std::string profile, mesh, svg;
  int nt = 64;
  double periods = 1.0;
  bool triangulate = false;
};

int run_find(const Common& o, const FindOpts& f) {
  const Params base = make_params(o, false);
  SearchOptions opt;
  opt.threads = o.threads;
  if (f.c_min || f.c_max) {
    const auto def = default_scan_range(base);
    opt.range = std::make_pair(f.c_min.value_or(def.first), f.c_max.value_or(def.second));
  }
  const SearchResult r = solve_for_rational(base, f.n, f.m, opt);
  PieceOptions popt;
  popt.samples = f.samples;
  const ProfileCurve piece = integrate_piece(r.piece, popt);
  const ProfileCurve full = assemble_profile(piece, static_cast<int>(f.m));
  const EmbeddingReport emb = embedding_precheck(full);
  const ImmersionReport imm = immersion_report(r.piece);

  if (!f.profile.empty()) export_profile_csv(full, f.profile);
  if (!f.svg.empty()) export_profile_svg(full, f.svg);
  if (!f.mesh.empty()) {
    const double t1 = f.periods * 2.0 * std::numbers::pi / base.omega;
    ObjOptions oo;
    oo.triangulate = f.triangulate;
    export_obj(build_patch(full, 0.0, t1, static_cast<std::size_t>(f.nt)), f.mesh, oo);
  }

  Output out(o.output);
  if (o.json) {
    out.stream() << search_json(base, r, emb, imm) << '\n';
    return 0;
  }
  auto& os = out.stream();
  os << "target     2*pi*" << f.n << "/" << f.m << " = " << fmt_num(r.target) << '\n';
  os << "C          " << format_double(r.c_solution) << '\n';
  os << "residual   " << fmt_num(r.residual) << '\n';
  os << "r range    [" << fmt_num(r.piece.r_lo) << ", " << fmt_num(r.piece.r_hi) << "]\n";
  os << "embedding  " << to_string(emb.verdict);
  if (emb.crossing) os << " at (" << fmt_num(emb.crossing->first) << ", " << fmt_num(emb.crossing->second) << ")";
  os << '\n';
  if (f.n > 1) os << "note       n > 1: never-embeddable candidate\n";
  return 0;
}

struct StabilityOpts {
  double h = 1.0;
  std::string bound = "all";
  std::string test = "unit";
  bool cylinder = false;
  std::optional<double> radius;
  int samples = 4096;
  std::string potential_csv;
  bool flux = false;
  bool with_potential = false;
  int nt = 64;
};

int run_stability(const Common& o, const StabilityOpts& s) {
  Params p;
  ProfileCurve loop;
  if (s.cylinder && s.radius) {
    // Cylinder of radius R whose normal points away from the axis (ξ₂ = +R);
    // Λ₀ and C follow from the fixed-point equation and G.
    const double R = *s.radius;
    if (!(R > 0.0)) throw ValidationError("--radius must be positive");
    if (!o.a) throw ValidationError("--a is required with --radius");
    if (!o.omega) throw ValidationError("--omega is required");
    const double a = *o.a;
    const double lambda0 = 0.5 * a * R * R - 1.0 / R;
    p = {a, lambda0, *o.omega, 2.0 * R + lambda0 * R * R - 0.25 * a * R * R * R * R};
    validate(p);
    loop = cylinder_profile(p, R * R, s.samples);
  } else {
    p = make_params(o, true);
    if (normalized_case(p) != Case::General) p = classify(p).params;
    const RootStructure rs = isolate_roots(build_quartic(p));
    if (s.cylinder) {
      auto it = std::find_if(rs.roots.begin(), rs.roots.end(),
                             [](const Root& r) { return r.multiplicity >= 2 && r.r > 0.0; });
      if (it == rs.roots.end()) throw ValidationError("no round cylinder at this C");
      loop = cylinder_profile(p, it->r, s.samples);
    } else {
      auto it = std::find_if(rs.intervals.begin(), rs.intervals.end(), [](const PositiveInterval& iv) {
        return iv.lo_mult == 1 && iv.hi_mult == 1 && iv.lo > 0.0;
      });
      if (it == rs.intervals.end()) throw ValidationError("no regular closed loop at this C");
      PieceOptions popt;
      popt.samples = s.samples;
      loop = integrate_piece(make_spec(p, *it), popt);
    }
  }

  BoundSelection which = BoundSelection::All;
  if (s.bound == "bound1") which = BoundSelection::Bound1;
  else if (s.bound == "bb") which = BoundSelection::BB;
  TestFunction test = TestFunction::Unit;
  if (s.test == "exp-nu3") test = TestFunction::ExpNu3;
  else if (s.test == "zero") test = TestFunction::Zero;

  const StabilityInput in{loop, s.h, p};
  const StabilityReport rep = stability_report(in, which, test);
  StabilityContext ctx{p, s.h, s.cylinder, s.with_potential, std::nullopt};
  if (s.flux) ctx.flux = flux_integrals(build_patch(loop, -0.5 * s.h, 0.5 * s.h, static_cast<std::size_t>(s.nt)));
  if (!s.potential_csv.empty()) {
    std::ofstream f(s.potential_csv);
    if (!f) throw IoFailure("cannot open " + s.potential_csv + " for writing");
    write_potential_csv(rep, f);
  }

  Output out(o.output);
  if (o.json) {
    out.stream() << stability_json(rep, ctx) << '\n';
    return 0;
  }
  auto& os = out.stream();
  os << "h            " << fmt_num(s.h) << '\n';
  os << "area         " << fmt_num(rep.area) << '\n';
  os << "K integral   " << fmt_num(rep.k_integral) << "  (|K| " << fmt_num(rep.k_abs_integral) << ")\n";
  if (rep.bound1) {
    os << "bound1       lhs " << fmt_num(rep.bound1->lhs) << "  rhs " << fmt_num(rep.bound1->rhs) << "  h_max "
       << fmt_num(rep.bound1->h_max) << (rep.bound1->violated ? "  VIOLATED" : "") << '\n';
  }
  if (rep.bb) {
    os << "bb           lhs " << fmt_num(rep.bb->lhs) << "  rhs " << fmt_num(rep.bb->rhs) << "  h_max "
       << fmt_num(rep.bb->h_max) << (rep.bb->violated ? "  VIOLATED" : "") << '\n';
    os << "rhs_bb>=w^2  " << (rep.bb->rhs >= p.omega * p.omega ? "yes" : "no") << '\n';
  }
  os << "d2E (" << to_string(test) << ")  " << fmt_num(rep.second_var_value) << '\n';
  if (ctx.flux) {
    os << "volume       " << fmt_num(ctx.flux->volume) << "\nR^2 moment   " << fmt_num(ctx.flux->r2_moment)
       << "\nenergy       " << fmt_num(ctx.flux->energy) << '\n';
  }
  return 0;
}

void add_common(CLI::App& app, Common& o) {
  app.add_option("--case", o.case_name, "Parameter case: I, II or general")
      ->check(CLI::IsMember({"I", "II", "i", "ii", "general"}));
  app.add_option("--a", o.a, "Coupling a");
  app.add_option("--lambda0", o.lambda0, "Multiplier (only with --case general)");
  app.add_option("--omega", o.omega, "Helicoidal pitch omega > 0");
  app.add_option("--c", o.c, "Level C of the first integral");
  app.add_flag("--json", o.json, "Machine-readable JSON output");
  app.add_option("--threads", o.threads, "Worker threads (default: HELIDROP_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("-o,--output", o.output, "Write the report to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helidrop: helicoidal rotating drops"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; flags take precedence");
  Common common;
  add_common(app, common);

  auto* classify_cmd = app.add_subcommand("classify", "Moduli region and surface inventory at one C");

  DeltaThetaOpts dt;
  auto* dt_cmd = app.add_subcommand("delta-theta", "Turning angle of the fundamental piece, or a grid in C");
  dt_cmd->add_option("--grid", dt.grid, "Number of C values (CSV output)");
  dt_cmd->add_option("--c-min", dt.c_min, "Grid start (default: range of the Delta-theta graph)");
  dt_cmd->add_option("--c-max", dt.c_max, "Grid end");

  FindOpts fo;
  auto* find_cmd = app.add_subcommand("find", "Solve Delta-theta = 2*pi*n/m for C and check embedding");
  find_cmd->add_option("--m", fo.m, "Denominator m")->required()->check(CLI::PositiveNumber);
  find_cmd->add_option("--n", fo.n, "Numerator n")->check(CLI::PositiveNumber);
  find_cmd->add_option("--c-min", fo.c_min, "Scan range start");
  find_cmd->add_option("--c-max", fo.c_max, "Scan range end");
  find_cmd->add_option("--samples", fo.samples, "Profile samples per piece")->check(CLI::Range(2, 1 << 22));
  find_cmd->add_option("--profile", fo.profile, "Write the assembled profile as CSV");
  find_cmd->add_option("--svg", fo.svg, "Write the assembled profile as SVG");
  find_cmd->add_option("--mesh", fo.mesh, "Write the surface as OBJ");
  find_cmd->add_option("--nt", fo.nt, "Mesh rows along the helix")->check(CLI::Range(2, 1 << 20));
  find_cmd->add_option("--periods", fo.periods, "Mesh height in periods 2*pi/omega")->check(CLI::PositiveNumber);
  find_cmd->add_flag("--triangulate", fo.triangulate, "Split mesh quads into triangles");

  StabilityOpts so;
  auto* st_cmd = app.add_subcommand("stability", "Second-variation height bounds for one loop");
  st_cmd->add_option("--height", so.h, "Slab height h")->check(CLI::PositiveNumber);
  st_cmd->add_option("--bound", so.bound, "all, bound1 or bb")->check(CLI::IsMember({"all", "bound1", "bb"}));
  st_cmd->add_option("--test", so.test, "Test function u(s): unit, exp-nu3 or zero")
      ->check(CLI::IsMember({"unit", "exp-nu3", "zero"}));
  st_cmd->add_flag("--cylinder", so.cylinder, "Use the round cylinder at the multiple root");
  st_cmd->add_option("--radius", so.radius, "With --cylinder: outward-normal cylinder of this radius");
  st_cmd->add_option("--samples", so.samples, "Loop samples")->check(CLI::Range(8, 1 << 22));
  st_cmd->add_option("--potential-csv", so.potential_csv, "Write (s, potential) as CSV");
  st_cmd->add_flag("--potential", so.with_potential, "Include the potential profile in JSON");
  st_cmd->add_flag("--flux", so.flux, "Flux volume, R^2 moment and energy of the slab patch");
  st_cmd->add_option("--nt", so.nt, "Patch rows for --flux")->check(CLI::Range(2, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*classify_cmd) return run_classify(common);
    if (*dt_cmd) return run_delta_theta(common, dt);
    if (*find_cmd) return run_find(common, fo);
    if (*st_cmd) return run_stability(common, so);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    if (common.json) std::cout << error_json(e.kind(), e.what()) << '\n';
    return dynamic_cast<const ValidationError*>(&e) ? kExitValidation : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (common.json) std::cout << error_json("internal", e.what()) << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}

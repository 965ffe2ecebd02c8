#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "helidrop/classify.hpp"
#include "helidrop/profile.hpp"
#include "helidrop/stability.hpp"

namespace helidrop {

// Lowercase names used in every JSON and CSV output.
const char* to_string(Region r);
const char* to_string(SurfaceKind k);
const char* to_string(GridMarker m);
const char* to_string(EmbeddingVerdict v);
const char* to_string(ImmersionVerdict v);
const char* to_string(TestFunction t);
const char* to_string(Case c);

/// Shortest decimal that reads back to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double v);

/// Profile CSV with header s,x,y,xi1,xi2,theta,theta_tilde.
void write_profile_csv(const ProfileCurve& curve, std::ostream& out);
void export_profile_csv(const ProfileCurve& curve, const std::string& path);

/// Reads the samples back; the remaining ProfileCurve fields stay default.
/// Throws IoFailure on a malformed file.
ProfileCurve read_profile_csv(std::istream& in);
ProfileCurve import_profile_csv(const std::string& path);

/// Grid CSV with header c,delta_theta,marker,component; an undefined Δθ̃ is
/// written as an empty field.
void write_grid_csv(const std::vector<GridEntry>& grid, std::ostream& out);

/// Potential profile CSV with header s,potential.
void write_potential_csv(const StabilityReport& rep, std::ostream& out);

// JSON documents. Non-finite numbers are written as null.
std::string params_json(const Params& p, int indent = 2);
std::string classify_json(const ModuliVerdict& v, int indent = 2);
std::string delta_theta_json(const Params& p, const std::optional<double>& delta_theta,
                             const std::optional<ImmersionReport>& immersion, int indent = 2);
std::string grid_json(const Params& base, const std::vector<GridEntry>& grid, int indent = 2);
std::string search_json(const Params& base, const SearchResult& r, const std::optional<EmbeddingReport>& embedding,
                        const std::optional<ImmersionReport>& immersion, int indent = 2);

struct StabilityContext {
  Params params;
  double h = 0.0;
  bool cylinder = false;
  bool include_potential = false;
  std::optional<FluxIntegrals> flux;
};

std::string stability_json(const StabilityReport& rep, const StabilityContext& ctx, int indent = 2);
std::string error_json(const std::string& kind, const std::string& message, int indent = 2);

}  // namespace helidrop

#pragma once

#include <stdexcept>
#include <string>

namespace helidrop {

// Base of every failure raised by the library. The CLI maps ValidationError
// to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

#define HELIDROP_DECLARE_ERROR(Name, tag)                        \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(what) {}      \
    const char* kind() const noexcept override { return tag; }   \
  };

HELIDROP_DECLARE_ERROR(ValidationError, "validation_error")
HELIDROP_DECLARE_ERROR(DegenerateQuartic, "degenerate_quartic")
HELIDROP_DECLARE_ERROR(BranchUndefined, "branch_undefined")
HELIDROP_DECLARE_ERROR(NonpositiveCurvatureA, "nonpositive_curvature_a")
HELIDROP_DECLARE_ERROR(DivergentAngle, "divergent_angle")
HELIDROP_DECLARE_ERROR(ConservationBlown, "conservation_blown")
HELIDROP_DECLARE_ERROR(StalledAtFixedPoint, "stalled_at_fixed_point")
HELIDROP_DECLARE_ERROR(NoBracket, "no_bracket")
HELIDROP_DECLARE_ERROR(RoundCylinderInput, "round_cylinder_input")
HELIDROP_DECLARE_ERROR(DegenerateMesh, "degenerate_mesh")
HELIDROP_DECLARE_ERROR(EmptyProfile, "empty_profile")
HELIDROP_DECLARE_ERROR(IoFailure, "io_failure")

#undef HELIDROP_DECLARE_ERROR

}  // namespace helidrop

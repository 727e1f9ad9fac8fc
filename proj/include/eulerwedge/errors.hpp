#pragma once
#include <stdexcept>
#include <string>

namespace ew {

enum class Err {
  // construction / input
  InvalidRank,
  IndexOutOfRange,
  ParseError,
  IoError,
  DimensionMismatch,
  // root systems
  OrbitTooLarge,
  // Lie algebra analysis
  NotEuler,
  JacobiViolation,
  NumericalFailure,
  AutomorphismViolation,
  CriteriaDisagree,
  // cones
  SolverFailure,
  NotInvariant,
  NotSkewHermitian,
  // wedge space
  InvariantViolation,
  NoGeometricRealization,
  // causal geometry
  NotProper,
  NotOnManifold,
  EmptyRegionSample,
  // standard subspaces
  NotModularPair,
  NotStandard,
  ModularRelationViolation,
  // nets
  AmbiguousInclusion,
  PreconditionViolated,
  // grid models
  ResolutionTooCoarse,
  GeneratorIllConditioned,
  EmptyDictionary,
};

const char* err_name(Err e);

// true for errors caused by unreadable/ill-formed input rather than by the
// mathematical content; the CLI maps these to a distinct exit code
bool is_io_error(Err e);

class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg),
        code_(code) {}
  Err code() const { return code_; }

private:
  Err code_;
};

}  // namespace ew

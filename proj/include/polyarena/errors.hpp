#pragma once

#include <stdexcept>
#include <string>

namespace polyarena {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define POLYARENA_DEFINE_ERROR(Name)          \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

// geometry
POLYARENA_DEFINE_ERROR(DegeneratePolygon);
POLYARENA_DEFINE_ERROR(NonConvexPolygon);
POLYARENA_DEFINE_ERROR(NonPositiveMass);
POLYARENA_DEFINE_ERROR(NonPositiveScale);

// sprites and state
POLYARENA_DEFINE_ERROR(UnknownShapeName);
POLYARENA_DEFINE_ERROR(InvariantViolation);
POLYARENA_DEFINE_ERROR(UnknownLayer);
POLYARENA_DEFINE_ERROR(MissingSprite);

// procedural generation
POLYARENA_DEFINE_ERROR(RejectionBudgetExceeded);
POLYARENA_DEFINE_ERROR(PlacementBudgetExceeded);
POLYARENA_DEFINE_ERROR(KeyMissing);

// actions, rules, observers
POLYARENA_DEFINE_ERROR(MissingSubAction);
POLYARENA_DEFINE_ERROR(ActionOutOfSpec);
POLYARENA_DEFINE_ERROR(ImmutableField);
POLYARENA_DEFINE_ERROR(CapacityExceeded);

// environment
POLYARENA_DEFINE_ERROR(SteppedAfterLast);

// recipes
POLYARENA_DEFINE_ERROR(UnknownComponentName);
POLYARENA_DEFINE_ERROR(UnknownBuiltin);

// recorder and server
POLYARENA_DEFINE_ERROR(SinkWriteError);
POLYARENA_DEFINE_ERROR(IoError);
POLYARENA_DEFINE_ERROR(ProtocolError);

#undef POLYARENA_DEFINE_ERROR

/// Raised when a recipe document does not validate. `path()` is a JSON
/// pointer to the offending node, e.g. "/task" or "/physics/forces/0/params".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace polyarena

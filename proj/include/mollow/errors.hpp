#pragma once

#include <stdexcept>
#include <string>

namespace mollow {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define MOLLOW_DEFINE_ERROR(Name)              \
  class Name : public Error {                  \
  public:                                      \
    using Error::Error;                        \
  };

// numerics
MOLLOW_DEFINE_ERROR(SingularMatrix)
MOLLOW_DEFINE_ERROR(StepUnderflow)
// liouville
MOLLOW_DEFINE_ERROR(DimensionMismatch)
MOLLOW_DEFINE_ERROR(NonUniqueSteadyState)
// sensing
MOLLOW_DEFINE_ERROR(UnsupportedSensorCount)
MOLLOW_DEFINE_ERROR(DenominatorUnderflow)
MOLLOW_DEFINE_ERROR(InfeasibleEpsilon)
// cli-io
MOLLOW_DEFINE_ERROR(SchemaError)
MOLLOW_DEFINE_ERROR(ValidationError)

#undef MOLLOW_DEFINE_ERROR

} // namespace mollow

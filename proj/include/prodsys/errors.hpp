#pragma once

#include <stdexcept>
#include <string>

namespace prodsys {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PRODSYS_DEFINE_ERROR(Name)                 \
  class Name : public Error {                      \
   public:                                         \
    explicit Name(const std::string& what)         \
        : Error(std::string(#Name ": ") + what) {} \
  }

PRODSYS_DEFINE_ERROR(InvalidInput);
PRODSYS_DEFINE_ERROR(DimensionError);
PRODSYS_DEFINE_ERROR(RangeError);
PRODSYS_DEFINE_ERROR(InvalidUnit);
PRODSYS_DEFINE_ERROR(InvalidInclusionSystem);
PRODSYS_DEFINE_ERROR(EvaluationError);
PRODSYS_DEFINE_ERROR(GridError);
PRODSYS_DEFINE_ERROR(NonContractiveMorphism);
PRODSYS_DEFINE_ERROR(PartialIsometryPrecondition);
PRODSYS_DEFINE_ERROR(NonzeroProjectionViolation);
PRODSYS_DEFINE_ERROR(InconsistentFamily);
PRODSYS_DEFINE_ERROR(PreconditionError);
PRODSYS_DEFINE_ERROR(VerificationFailure);
PRODSYS_DEFINE_ERROR(CapacityError);

#undef PRODSYS_DEFINE_ERROR

}  // namespace prodsys

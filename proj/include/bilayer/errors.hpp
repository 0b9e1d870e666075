#pragma once

#include <stdexcept>
#include <string>

namespace bilayer {

/// Base class for every error raised by the library. `kind()` is a stable
/// CamelCase tag that the CLI prints as a machine-parseable prefix.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define BILAYER_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(#Name, what) {}       \
  };

BILAYER_DEFINE_ERROR(DegenerateParameters)
BILAYER_DEFINE_ERROR(ConstraintViolation)
BILAYER_DEFINE_ERROR(NonPositiveParameter)
BILAYER_DEFINE_ERROR(DomainViolation)
BILAYER_DEFINE_ERROR(LevelOutOfRange)
BILAYER_DEFINE_ERROR(NotSquareIntegrable)
BILAYER_DEFINE_ERROR(TailMassTooLarge)
BILAYER_DEFINE_ERROR(EnvelopeUndefined)
BILAYER_DEFINE_ERROR(WindowTooSmall)
BILAYER_DEFINE_ERROR(ConvergenceFailure)
BILAYER_DEFINE_ERROR(InvalidConfig)
BILAYER_DEFINE_ERROR(IoError)

#undef BILAYER_DEFINE_ERROR

}  // namespace bilayer

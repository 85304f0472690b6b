#pragma once

#include <stdexcept>
#include <string>

namespace esbgk {

enum class ErrorKind {
  InvalidParameter,
  LengthMismatch,
  DimensionMismatch,
  NonPositiveDensity,
  NuOutOfRange,
  NotSpd,
  NoConvergence,
  DegenerateBasis,
  SingularGram,
  CflViolation,
  BoundViolation,
  InsufficientSamples,
  ConfigInvalid,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Open interval check -1/2 < nu < 1; throws NuOutOfRange otherwise.
void require_nu_in_range(double nu);

}  // namespace esbgk

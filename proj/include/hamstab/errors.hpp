#pragma once

#include <stdexcept>
#include <string>

namespace hamstab {

/// Base class for all structured failures. `name()` is the stable identifier
/// emitted on stderr by the CLI; `exit_code()` maps to the process exit code.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& what, int exit_code)
      : std::runtime_error(what), name_(std::move(name)), exit_code_(exit_code) {}

  const std::string& name() const { return name_; }
  int exit_code() const { return exit_code_; }

private:
  std::string name_;
  int exit_code_;
};

/// Bad configuration, malformed input files, unknown keys. Exit code 2.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what, std::string name = "ConfigError")
      : Error(std::move(name), what, 2) {}
};

class FormatError : public ConfigError {
public:
  explicit FormatError(const std::string& what) : ConfigError(what, "FormatError") {}
};

/// Numerical failures (degenerate problems, accuracy faults). Exit code 3.
class NumericalError : public Error {
public:
  NumericalError(std::string name, const std::string& what)
      : Error(std::move(name), what, 3) {}
};

#define HAMSTAB_DEFINE_NUMERICAL_ERROR(NAME)                          \
  class NAME : public NumericalError {                                \
  public:                                                             \
    explicit NAME(const std::string& what) : NumericalError(#NAME, what) {} \
  };

HAMSTAB_DEFINE_NUMERICAL_ERROR(DimensionError)
HAMSTAB_DEFINE_NUMERICAL_ERROR(InvalidFrame)
HAMSTAB_DEFINE_NUMERICAL_ERROR(InvalidSymmetry)
HAMSTAB_DEFINE_NUMERICAL_ERROR(InvalidEccentricity)
HAMSTAB_DEFINE_NUMERICAL_ERROR(StiffnessError)
HAMSTAB_DEFINE_NUMERICAL_ERROR(AccuracyError)
HAMSTAB_DEFINE_NUMERICAL_ERROR(DegenerateBaseProblem)
HAMSTAB_DEFINE_NUMERICAL_ERROR(DegenerateEndpoint)
HAMSTAB_DEFINE_NUMERICAL_ERROR(DegenerateFactor)
HAMSTAB_DEFINE_NUMERICAL_ERROR(WindowTooSmall)
HAMSTAB_DEFINE_NUMERICAL_ERROR(TruncationResonance)
HAMSTAB_DEFINE_NUMERICAL_ERROR(ParityMismatch)

#undef HAMSTAB_DEFINE_NUMERICAL_ERROR

}  // namespace hamstab

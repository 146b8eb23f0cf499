#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace proxres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::complex<double> last_iterate,
                   double residual_magnitude)
      : Error(what), last_iterate_(last_iterate), residual_(residual_magnitude) {}

  std::complex<double> last_iterate() const noexcept { return last_iterate_; }
  double residual_magnitude() const noexcept { return residual_; }

 private:
  std::complex<double> last_iterate_;
  double residual_;
};

/// Requested mode or level does not exist in the admissible range.
class NoSuchModeError : public Error {
 public:
  using Error::Error;
};

/// Resonator positions that overlap or are otherwise inconsistent.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Operation not available for the given mode family.
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

/// Computational box too small for the requested states.
class BoxError : public Error {
 public:
  using Error::Error;
};

/// Complex energy with a growing (gain) imaginary part where only loss is physical.
class GainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Invalid configuration file, override or value; names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string section, std::string key, const std::string& what)
      : Error(section.empty() ? what
              : key.empty()   ? section + ": " + what
                              : section + "." + key + ": " + what),
        section_(std::move(section)),
        key_(std::move(key)) {}

  const std::string& section() const noexcept { return section_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::string section_;
  std::string key_;
};

}  // namespace proxres

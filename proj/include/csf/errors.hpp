#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace csf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampled inputs whose grids disagree.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate values (overflow, NaN input).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Explicit advection step requested with max|u| dt/dz >= 1.
class CflViolation : public Error {
 public:
  CflViolation(double cfl, double t)
      : Error("CFL number " + std::to_string(cfl) + " >= 1 at t = " + std::to_string(t)),
        cfl_(cfl),
        t_(t) {}
  double cfl() const noexcept { return cfl_; }
  double time() const noexcept { return t_; }

 private:
  double cfl_;
  double t_;
};

// Characteristics / Riccati analysis.

class NoRoot : public Error {
 public:
  using Error::Error;
};

class MultipleRoots : public Error {
 public:
  using Error::Error;
};

class BlowupReached : public Error {
 public:
  BlowupReached(double t_blow)
      : Error("characteristic slope diverges at t = " + std::to_string(t_blow)), t_blow_(t_blow) {}
  double blowup_time() const noexcept { return t_blow_; }

 private:
  double t_blow_;
};

class ComplexEigenvalues : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

class SlopeZeroAtFoot : public Error {
 public:
  using Error::Error;
};

/// Picard iteration whose successive differences stopped shrinking.
class NotContracting : public Error {
 public:
  NotContracting(std::vector<double> ratios)
      : Error("Picard iteration is not contracting (" + std::to_string(ratios.size()) +
              " ratios recorded); reduce the time horizon"),
        ratios_(std::move(ratios)) {}
  const std::vector<double>& ratios() const noexcept { return ratios_; }

 private:
  std::vector<double> ratios_;
};

// Configuration ingestion.

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class UnknownKey : public ConfigError {
 public:
  explicit UnknownKey(std::string name)
      : ConfigError("unknown key '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnitError : public ConfigError {
 public:
  UnitError(std::string field, const std::string& what)
      : ConfigError("field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace csf

#ifndef HYPERLIM_ERRORS_HPP
#define HYPERLIM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlim {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A state left the admissible region, or an argument violated a domain
/// precondition.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// A marching solution left the enlarged state box. Carries the first
/// offending location (grid node or lattice cell) and, when known, the
/// step index or time at which it happened.
class DomainEscapeError : public DomainError {
public:
  DomainEscapeError(const std::string& what, long location, double when,
                    long step = -1)
      : DomainError(what), location(location), when(when), step(step) {}
  long location;  ///< node index (backward) or cell index (semidiscrete)
  double when;    ///< x coordinate or time, scheme dependent
  long step;      ///< step index if attached by the driver, else -1
};

/// Eigenvalues failed to be real, ordered, or separated.
class HyperbolicityError : public Error {
public:
  explicit HyperbolicityError(const std::string& what) : Error(what) {}
};

/// A truncated sum or integral could not meet its tail bound.
class TruncationError : public Error {
public:
  explicit TruncationError(const std::string& what) : Error(what) {}
};

/// Invalid parameter combination (e.g. separation >= speed cap).
class ParameterError : public Error {
public:
  explicit ParameterError(const std::string& what) : Error(what) {}
};

/// A precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Configuration parsing/validation failure; collects every offending key.
class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(join(issues)), issues(std::move(issues)) {}
  std::vector<std::string> issues;

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "configuration errors:";
    for (const auto& e : v) {
      s += "\n  - ";
      s += e;
    }
    return s;
  }
};

/// File I/O or CSV parse failure; line is 1-based when applicable.
class IoError : public Error {
public:
  IoError(const std::string& what, long line = -1) : Error(what), line(line) {}
  long line;
};

}  // namespace hyperlim

#endif  // HYPERLIM_ERRORS_HPP

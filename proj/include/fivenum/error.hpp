#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fivenum {

// Argument outside the mathematical domain of a function (p = 0 for a
// quantile, rank out of range, n not of the form 4Q+1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A required field of the reported summary is absent for the requested
// estimator (e.g. asking for the range estimator without min/max).
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One violated invariant of a reported summary. `code` is machine readable
// and stable; it is shared by the CLI, the CSV converter and the service.
struct Violation {
  std::string code;
  std::string message;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<Violation>& v) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += "; ";
      out += item.code + ": " + item.message;
    }
    return out;
  }

  std::vector<Violation> violations_;
};

// Quadrature or iterative routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file; `line` is 1-based, 0 when not attributable to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fivenum

#pragma once

#include <stdexcept>
#include <string>

namespace rooftrace {

// Invalid argument to an analytic formula or a geometry check.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input data (MatrixMarket files, trace files, config files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        source_(source),
        line_(line) {}

  explicit ParseError(const std::string& what) : std::runtime_error(what) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_ = 0;
};

// Numerical breakdown inside an iterative solver.
class SolverBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rooftrace

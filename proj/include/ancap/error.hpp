#pragma once

#include <stdexcept>
#include <string>

namespace ancap {

enum class ErrorKind {
  invalid_geometry,
  invalid_parameter,
  degenerate_geometry,
  resource_limit,
  solver_failure,
  numerical_breakdown,
  inconsistency,
  non_convergence,
  geometry_collision,
  domain_error,
  io_error,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind lets
/// callers (and the CLI exit-code mapping) distinguish bad input from
/// numerical trouble without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by the caller's input rather than the solver.
  bool is_input_error() const noexcept {
    return kind_ == ErrorKind::invalid_geometry || kind_ == ErrorKind::invalid_parameter ||
           kind_ == ErrorKind::domain_error || kind_ == ErrorKind::io_error ||
           kind_ == ErrorKind::resource_limit;
  }

 private:
  ErrorKind kind_;
};

}  // namespace ancap

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lismodes {

enum class ErrorKind {
  invalid_argument,
  invalid_input,
  singular_kernel,
  resource_limit,
  geometry,
  convergence,
  invalid_use,
  config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base for every error raised by the library. The kind is the stable part of
/// the contract; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ResourceLimitError : public Error {
 public:
  ResourceLimitError(std::size_t required_bytes, std::size_t cap_bytes);

  std::size_t required_bytes() const noexcept { return required_bytes_; }
  std::size_t cap_bytes() const noexcept { return cap_bytes_; }

 private:
  std::size_t required_bytes_;
  std::size_t cap_bytes_;
};

/// Raised when adaptive quadrature exhausts its subdivision budget. Carries the
/// best available estimate so callers can decide whether it is good enough.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double best_estimate, double error_estimate);

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace lismodes

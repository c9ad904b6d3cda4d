#include "lismodes/errors.hpp"

#include <sstream>

namespace lismodes {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::singular_kernel: return "singular-kernel";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::invalid_use: return "invalid-use";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {
std::string resource_message(std::size_t required, std::size_t cap) {
  std::ostringstream os;
  os << "coupling matrix needs " << required << " bytes, cap is " << cap << " bytes";
  return os.str();
}
}  // namespace

ResourceLimitError::ResourceLimitError(std::size_t required_bytes, std::size_t cap_bytes)
    : Error(ErrorKind::resource_limit, resource_message(required_bytes, cap_bytes)),
      required_bytes_(required_bytes),
      cap_bytes_(cap_bytes) {}

ConvergenceError::ConvergenceError(const std::string& message, double best_estimate,
                                   double error_estimate)
    : Error(ErrorKind::convergence, message),
      best_estimate_(best_estimate),
      error_estimate_(error_estimate) {}

}  // namespace lismodes

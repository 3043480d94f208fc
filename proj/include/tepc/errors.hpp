#ifndef TEPC_ERRORS_HPP
#define TEPC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tepc {

struct InvalidParameter : std::invalid_argument {
  explicit InvalidParameter(const std::string& msg) : std::invalid_argument(msg) {}
};

// Thrown by the exhaustive oracles when the joint action space exceeds the
// configured enumeration cap.
struct InstanceTooLarge : std::runtime_error {
  explicit InstanceTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an analysis step requires the simplified channel pattern but
// the instance carries general gains.
struct ModelMismatch : std::runtime_error {
  explicit ModelMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tepc

#endif

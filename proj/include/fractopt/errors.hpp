#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fractopt {

// All library failures surface as Error; what() is "<module>: <message>"
// so callers and the CLI can report which subsystem rejected the input.
class Error : public std::runtime_error {
  public:
    Error(std::string module, std::string message)
        : std::runtime_error(module + ": " + message),
          module_(std::move(module)),
          message_(std::move(message)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& message() const noexcept { return message_; }

  private:
    std::string module_;
    std::string message_;
};

}  // namespace fractopt
